#pragma once

// Seeded random rational profiles for property tests and the CLI.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "cake/valuation.hpp"

namespace cake {

struct RandomProfileConfig {
  std::size_t max_breakpoints = 4;  // interior breakpoints per agent: 0..max
  long grid = 60;                   // breakpoints are multiples of 1/grid
  long max_weight = 9;              // segment weights drawn from 0..max_weight
  bool hungry = false;              // forbid zero-density segments
};

/// Random normalized valuation with at most cfg.max_breakpoints interior breakpoints.
inline Valuation random_valuation(std::mt19937_64& rng, const RandomProfileConfig& cfg = {}) {
  std::uniform_int_distribution<std::size_t> count(0, cfg.max_breakpoints);
  std::uniform_int_distribution<long> point(1, cfg.grid - 1);
  std::uniform_int_distribution<long> weight(cfg.hungry ? 1 : 0, cfg.max_weight);
  std::set<long> picks;
  const std::size_t want = std::min<std::size_t>(count(rng), static_cast<std::size_t>(cfg.grid - 1));
  while (picks.size() < want) picks.insert(point(rng));
  std::vector<Rational> bps;
  for (long x : picks) bps.emplace_back(x, cfg.grid);
  std::vector<Rational> masses(bps.size() + 1);
  bool any = false;
  while (!any) {
    for (auto& m : masses) {
      m = Rational(weight(rng));
      any = any || m.sign() > 0;
    }
  }
  Rational total;
  for (const auto& m : masses) total += m;
  for (auto& m : masses) m = m / total;
  return Valuation::from_masses(bps, masses);
}

inline Profile random_profile(std::mt19937_64& rng, std::size_t n, const RandomProfileConfig& cfg = {}) {
  std::vector<Valuation> agents;
  agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) agents.push_back(random_valuation(rng, cfg));
  return Profile(std::move(agents));
}

}  // namespace cake
