#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nlpmm {

// Dense indices into the location/object universes. External string ids map
// bijectively onto these through an Interner.
using LocationId = std::uint32_t;
using ObjectId = std::uint32_t;

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct TrajectoryUnit {
  LocationId location = 0;
  Timestamp time = 0;

  bool operator==(const TrajectoryUnit&) const = default;
};

struct PassageRecord {
  ObjectId object = 0;
  LocationId location = 0;
  Timestamp time = 0;

  bool operator==(const PassageRecord&) const = default;
};

// Time-ordered sequence of units for one object; timestamps strictly increase.
struct Trajectory {
  ObjectId object = 0;
  std::vector<TrajectoryUnit> units;

  bool operator==(const Trajectory&) const = default;
};

// Raised for malformed input text; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised for filesystem-level failures (missing file, unwritable path).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bijective mapping between external string ids and dense indices,
// assigned in interning order.
class Interner {
 public:
  std::uint32_t intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(std::uint32_t id) const { return names_.at(id); }

  std::size_t size() const { return names_.size(); }

  bool operator==(const Interner& other) const { return names_ == other.names_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
};

}  // namespace nlpmm
