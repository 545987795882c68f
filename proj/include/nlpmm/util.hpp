#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nlpmm {

// Formats a double with 17 significant digits so that parsing the text
// recovers the exact same bits. Locale-independent.
std::string format_double(double value);

// Inverse of format_double; accepts any from_chars-compatible literal.
double parse_double(std::string_view text);

// splitmix64 mixing, used to derive independent seeds from (seed, index...)
// pairs without correlated streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Thin deterministic wrapper around mt19937_64. The bounded/unit draws avoid
// std::uniform_*_distribution, whose output differs across standard library
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, n); n > 0
  std::size_t bounded(std::size_t n);

  // uniform in [0, 1)
  double unit();

  // k distinct values from [0, n), in draw order
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

std::vector<std::string> split(std::string_view text, char delimiter);

}  // namespace nlpmm
