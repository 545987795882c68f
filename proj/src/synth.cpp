#include "nlpmm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nlpmm/records.hpp"
#include "nlpmm/util.hpp"

namespace nlpmm {

namespace {

void validate_table(const TransitionTable& table, std::uint32_t location_count) {
  if (table.size() != location_count) {
    throw std::invalid_argument("regime table must cover every location");
  }
  for (const TransitionRow& row : table) {
    if (row.empty()) throw std::invalid_argument("regime table row is empty");
    double total = 0.0;
    for (const auto& [next, p] : row) {
      if (next >= location_count) throw std::invalid_argument("successor out of range");
      if (p < 0.0) throw std::invalid_argument("negative transition probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("transition row does not sum to 1");
    }
  }
}

void validate_config(const SynthConfig& cfg) {
  if (cfg.location_count < 2) throw std::invalid_argument("need at least 2 locations");
  if (cfg.out_degree < 1 ||
      static_cast<std::uint32_t>(cfg.out_degree) >= cfg.location_count) {
    throw std::invalid_argument("out degree must be in [1, m-1]");
  }
  if (cfg.object_count < 1) throw std::invalid_argument("need at least 1 object");
  if (cfg.trajectories_per_object < 1) {
    throw std::invalid_argument("need at least 1 trajectory per object");
  }
  if (cfg.singleton_fraction < 0.0 || cfg.singleton_fraction > 1.0) {
    throw std::invalid_argument("singleton fraction must be in [0, 1]");
  }
  if (cfg.length_tail < 0.0 || cfg.length_tail >= 1.0) {
    throw std::invalid_argument("length tail must be in [0, 1)");
  }
  if (cfg.max_length < 1) throw std::invalid_argument("max length must be >= 1");
  if (cfg.personal_bias < 0.0 || cfg.personal_bias > 1.0) {
    throw std::invalid_argument("personal bias must be in [0, 1]");
  }
  if (cfg.span_seconds <= 0 || cfg.unit_gap_seconds <= 0) {
    throw std::invalid_argument("span and unit gap must be positive");
  }
  if (cfg.day_end_guard_seconds < 0) {
    throw std::invalid_argument("day end guard must be non-negative");
  }
}

void validate_regime_windows(const std::vector<RegimeSpec>& regimes,
                             const SynthConfig& cfg) {
  if (regimes.front().start_second != 0 ||
      regimes.back().end_second != cfg.span_seconds) {
    throw std::invalid_argument("regimes must cover the whole cycle");
  }
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    if (regimes[i].start_second >= regimes[i].end_second) {
      throw std::invalid_argument("regime window is empty");
    }
    if (i > 0 && regimes[i].start_second != regimes[i - 1].end_second) {
      throw std::invalid_argument("regime windows must be contiguous");
    }
  }
  const std::int64_t walk_span =
      static_cast<std::int64_t>(cfg.max_length - 1) * cfg.unit_gap_seconds;
  for (const RegimeSpec& r : regimes) {
    std::int64_t end = r.end_second;
    if (end == cfg.span_seconds) end -= cfg.day_end_guard_seconds;
    if (end - r.start_second <= walk_span) {
      throw std::invalid_argument("regime window too small for max trajectory length");
    }
  }
}

LocationId sample_row(const TransitionRow& row, Rng& rng) {
  double u = rng.unit();
  for (const auto& [next, p] : row) {
    if (u < p) return next;
    u -= p;
  }
  return row.back().first;  // guard against accumulated rounding
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  validate_config(config);

  SynthOutput out;
  for (std::uint32_t o = 0; o < config.object_count; ++o) {
    out.objects.intern("O" + std::to_string(o));
  }
  for (std::uint32_t l = 0; l < config.location_count; ++l) {
    out.locations.intern("L" + std::to_string(l));
  }

  std::vector<RegimeSpec> regimes = config.regimes;
  if (regimes.empty()) {
    regimes.push_back(RegimeSpec{0, config.span_seconds, {}});
  }
  validate_regime_windows(regimes, config);

  // Planted graph: fixed successor pool per location, shared by the random
  // regime tables so the candidate structure is stable across regimes.
  Rng graph_rng(mix_seed(config.seed, 0x67726170ULL));
  std::vector<std::vector<LocationId>> graph(config.location_count);
  for (std::uint32_t l = 0; l < config.location_count; ++l) {
    auto picks = graph_rng.sample_without_replacement(config.location_count - 1,
                                                      config.out_degree);
    for (std::size_t p : picks) {
      // skip over l itself to avoid self-loops in the random graph
      graph[l].push_back(static_cast<LocationId>(p >= l ? p + 1 : p));
    }
    std::sort(graph[l].begin(), graph[l].end());
  }

  for (std::size_t r = 0; r < regimes.size(); ++r) {
    if (regimes[r].table.empty()) {
      Rng table_rng(mix_seed(config.seed, 0x7461626cULL, r));
      TransitionTable table(config.location_count);
      for (std::uint32_t l = 0; l < config.location_count; ++l) {
        double total = 0.0;
        std::vector<double> weights;
        for (std::size_t i = 0; i < graph[l].size(); ++i) {
          weights.push_back(0.05 + table_rng.unit());
          total += weights.back();
        }
        for (std::size_t i = 0; i < graph[l].size(); ++i) {
          table[l].emplace_back(graph[l][i], weights[i] / total);
        }
      }
      regimes[r].table = std::move(table);
    } else {
      validate_table(regimes[r].table, config.location_count);
    }
  }

  // Candidate pool per location over all regimes; personal preferences are
  // drawn from it.
  std::vector<std::vector<LocationId>> candidates(config.location_count);
  for (const RegimeSpec& regime : regimes) {
    for (std::uint32_t l = 0; l < config.location_count; ++l) {
      for (const auto& [next, p] : regime.table[l]) {
        if (p > 0.0) candidates[l].push_back(next);
      }
    }
  }
  for (auto& set : candidates) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }

  out.truth.personal_preference.resize(config.object_count);
  for (std::uint32_t o = 0; o < config.object_count; ++o) {
    Rng pref_rng(mix_seed(config.seed, 0x70726566ULL, o));
    auto& prefs = out.truth.personal_preference[o];
    prefs.reserve(config.location_count);
    for (std::uint32_t l = 0; l < config.location_count; ++l) {
      prefs.push_back(candidates[l][pref_rng.bounded(candidates[l].size())]);
    }
  }

  for (std::uint32_t o = 0; o < config.object_count; ++o) {
    for (int i = 0; i < config.trajectories_per_object; ++i) {
      Rng rng(mix_seed(config.seed, o, static_cast<std::uint64_t>(i)));

      int length = 1;
      if (rng.unit() >= config.singleton_fraction) {
        length = std::min(2, config.max_length);
        while (length < config.max_length && rng.unit() < config.length_tail) {
          ++length;
        }
      }

      const RegimeSpec& regime = regimes[rng.bounded(regimes.size())];
      std::int64_t window_end = regime.end_second;
      if (window_end == config.span_seconds) window_end -= config.day_end_guard_seconds;
      const std::int64_t walk_span =
          static_cast<std::int64_t>(length - 1) * config.unit_gap_seconds;
      const std::int64_t slack = window_end - regime.start_second - walk_span;
      const std::int64_t day = static_cast<std::int64_t>(i);
      Timestamp t = day * config.span_seconds + regime.start_second +
                    static_cast<std::int64_t>(rng.bounded(static_cast<std::size_t>(slack)));

      Trajectory trajectory{o, {}};
      LocationId current = static_cast<LocationId>(rng.bounded(config.location_count));
      trajectory.units.push_back({current, t});
      for (int step = 1; step < length; ++step) {
        LocationId next;
        if (config.personal_bias > 0.0 && rng.unit() < config.personal_bias) {
          next = out.truth.personal_preference[o][current];
        } else {
          next = sample_row(regime.table[current], rng);
        }
        t += config.unit_gap_seconds;
        trajectory.units.push_back({next, t});
        current = next;
      }
      out.trajectories.push_back(std::move(trajectory));
    }
  }

  out.truth.regimes = std::move(regimes);
  out.truth.personal_bias = config.personal_bias;
  return out;
}

void write_records(std::ostream& out, const SynthOutput& output) {
  for (const Trajectory& t : output.trajectories) {
    const std::string& object = output.objects.name(t.object);
    for (const TrajectoryUnit& u : t.units) {
      out << object << ',' << output.locations.name(u.location) << ','
          << format_timestamp(u.time) << '\n';
    }
  }
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  out << "nlpmm-truth v1\n";
  out << "regimes " << truth.regimes.size() << '\n';
  for (std::size_t r = 0; r < truth.regimes.size(); ++r) {
    const RegimeSpec& regime = truth.regimes[r];
    out << "regime " << r << ' ' << regime.start_second << ' ' << regime.end_second
        << '\n';
    for (std::size_t l = 0; l < regime.table.size(); ++l) {
      out << "row " << l << ' ' << regime.table[l].size();
      for (const auto& [next, p] : regime.table[l]) {
        out << ' ' << next << ':' << format_double(p);
      }
      out << '\n';
    }
  }
  out << "personal-bias " << format_double(truth.personal_bias) << '\n';
  out << "preferences " << truth.personal_preference.size() << '\n';
  for (std::size_t o = 0; o < truth.personal_preference.size(); ++o) {
    out << "pref " << o;
    for (LocationId next : truth.personal_preference[o]) out << ' ' << next;
    out << '\n';
  }
}

}  // namespace nlpmm
