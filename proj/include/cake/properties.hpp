#pragma once

// Exact fairness/efficiency checks and the misreport search used to bound
// manipulation gains from below.

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cake/allocation.hpp"
#include "cake/mechanisms.hpp"
#include "cake/valuation.hpp"

namespace cake {

struct PropertyReport {
  Rational proportionality_deficit;  // max_i (1/n - V_i(A_i)), floored at 0
  Rational envy;                     // max_{i,j} (V_i(A_j) - V_i(A_i)), floored at 0
  Rational wasted_measure;           // desired cake not held by an agent desiring it
  bool contiguous = true;
  std::vector<Rational> values;      // V_i(A_i)

  [[nodiscard]] bool proportional() const { return proportionality_deficit.is_zero(); }
  [[nodiscard]] bool envy_free() const { return envy.is_zero(); }
  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

/// Length of cake desired by some agent that sits in `discarded`, in no
/// piece, or with an agent whose density there is 0.
inline Rational wasted_measure(const Allocation& a, const Profile& p) {
  std::vector<Rational> pts = p.grid();
  auto add = [&pts](const Piece& piece) {
    for (const auto& iv : piece.intervals()) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  };
  for (const auto& piece : a.pieces) add(piece);
  add(a.discarded);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Rational wasted;
  for (std::size_t c = 0; c + 1 < pts.size(); ++c) {
    const Rational& lo = pts[c];
    const Rational& hi = pts[c + 1];
    bool desired = false;
    for (const auto& v : p.agents()) desired = desired || v.density_on(lo, hi).sign() > 0;
    if (!desired) continue;
    bool served = false;
    for (std::size_t i = 0; i < a.size() && !served; ++i)
      served = a.pieces[i].covers(lo, hi) && p[i].density_on(lo, hi).sign() > 0;
    if (!served) wasted += hi - lo;
  }
  return wasted;
}

inline PropertyReport report_properties(const Allocation& a, const Profile& p) {
  const std::size_t n = p.size();
  PropertyReport r;
  r.contiguous = a.contiguous();
  r.values = agent_values(a, p);
  const Rational share(1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    r.proportionality_deficit = max(r.proportionality_deficit, share - r.values[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r.envy = max(r.envy, p[i].value_of(a.pieces[j]) - r.values[i]);
  }
  r.wasted_measure = wasted_measure(a, p);
  return r;
}

inline PropertyReport check_properties(const Mechanism& m, const Profile& p) { return report_properties(m(p), p); }

/// A self-verifying manipulation certificate: agent `agent` with the true
/// valuation from the truthful profile gains `gain` by reporting `misreport`.
struct GainCertificate {
  std::size_t agent = 0;
  Rational truthful_value;
  Valuation misreport;
  Rational deviated_value;
  Rational gain;

  friend bool operator==(const GainCertificate&, const GainCertificate&) = default;
};

inline GainCertificate evaluate_misreport(const Mechanism& m, const Profile& truthful, std::size_t agent,
                                          const Valuation& misreport) {
  const Valuation& truth = truthful[agent];
  Rational honest = truth.value_of(m(truthful).pieces.at(agent));
  Rational deviated = truth.value_of(m(truthful.with(agent, misreport)).pieces.at(agent));
  Rational gain = deviated - honest;
  return {agent, std::move(honest), misreport, std::move(deviated), std::move(gain)};
}

/// Re-runs the mechanism on both profiles and compares every value exactly.
inline bool verify_certificate(const Mechanism& m, const Profile& truthful, const GainCertificate& cert) {
  if (cert.agent >= truthful.size()) return false;
  GainCertificate again = evaluate_misreport(m, truthful, cert.agent, cert.misreport);
  return again.truthful_value == cert.truthful_value && again.deviated_value == cert.deviated_value &&
         again.gain == cert.gain;
}

/// Stable text key used to break ties between equally good misreports.
inline std::string encode(const Valuation& v) {
  std::string s;
  for (const auto& b : v.breakpoints()) s += b.str() + ",";
  s += "|";
  for (const auto& d : v.densities()) s += d.str() + ",";
  return s;
}

struct SearchConfig {
  int resolution = 4;           // masses are multiples of 1/resolution
  int rounds = 2;               // offset refinements, halving each round
  int offset_divisor = 64;      // first offset = smallest candidate gap / offset_divisor
  std::size_t max_evaluations = 2000;
  std::uint64_t seed = 0;
  int limit_exponent = 40;      // cut-position engine: limit offsets are (first offset)/2^limit_exponent
};

namespace detail {

inline std::vector<Rational> sorted_unique(std::vector<Rational> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline Rational smallest_gap(const std::vector<Rational>& pts) {
  Rational gap(1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) gap = min(gap, pts[i + 1] - pts[i]);
  return gap;
}

/// Base points plus +-offsets for each round, restricted to (lo, hi).
inline std::vector<Rational> with_offsets(const std::vector<Rational>& base, const Rational& lo,
                                          const Rational& hi, const SearchConfig& cfg) {
  std::vector<Rational> pts;
  Rational gamma = smallest_gap(base) / Rational(cfg.offset_divisor);
  for (int r = 0; r < cfg.rounds; ++r) {
    for (const auto& b : base) {
      pts.push_back(b - gamma);
      pts.push_back(b + gamma);
    }
    gamma /= Rational(2);
  }
  pts.insert(pts.end(), base.begin(), base.end());
  std::erase_if(pts, [&](const Rational& x) { return !(lo < x && x < hi); });
  return sorted_unique(std::move(pts));
}

}  // namespace detail

/// Candidate misreport breakpoints: every true breakpoint, every endpoint of
/// the truthful allocation, and offsets on both sides of each.
inline std::vector<Rational> misreport_candidates(const Mechanism& m, const Profile& p, const SearchConfig& cfg) {
  std::vector<Rational> base = p.grid();
  Allocation truthful = m(p);
  for (const auto& piece : truthful.pieces)
    for (const auto& iv : piece.intervals()) {
      base.push_back(iv.lo);
      base.push_back(iv.hi);
    }
  base = detail::sorted_unique(std::move(base));
  return detail::with_offsets(base, Rational(0), Rational(1), cfg);
}

/// Grid search over normalized piecewise-constant misreports with one or two
/// breakpoints from the candidate set and masses on a 1/resolution simplex
/// grid. The returned gain is a lower bound on the supremum gain.
inline GainCertificate best_response_gain(const Mechanism& m, const Profile& p, std::size_t agent,
                                          const SearchConfig& cfg = {}) {
  if (agent >= p.size()) throw std::out_of_range("agent index out of range");
  const Valuation& truth = p[agent];
  const Rational honest = truth.value_of(m(p).pieces.at(agent));
  GainCertificate best{agent, honest, truth, honest, Rational(0)};
  std::string best_key = encode(truth);
  std::set<std::string> seen{best_key};
  std::size_t evaluations = 0;

  auto consider = [&](const std::vector<Rational>& bps, const std::vector<Rational>& masses) {
    Valuation report = Valuation::from_masses(bps, masses);
    std::string key = encode(report);
    if (!seen.insert(key).second) return;
    ++evaluations;
    Rational deviated = truth.value_of(m(p.with(agent, report)).pieces.at(agent));
    Rational gain = deviated - honest;
    if (gain > best.gain || (gain == best.gain && key < best_key)) {
      best = {agent, honest, std::move(report), std::move(deviated), std::move(gain)};
      best_key = std::move(key);
    }
  };

  const auto points = misreport_candidates(m, p, cfg);
  const int R = cfg.resolution;
  auto frac = [R](int j) { return Rational(j, R); };

  for (const auto& x : points)
    for (int j = 1; j < R; ++j) {
      if (evaluations >= cfg.max_evaluations) return best;
      consider({x}, {frac(j), frac(R - j)});
    }

  // two-breakpoint reports: exhaustive when the budget allows, sampled otherwise
  std::vector<std::array<int, 3>> splits;
  for (int a = 0; a <= R; ++a)
    for (int b = 0; a + b <= R; ++b) splits.push_back({a, b, R - a - b});
  const std::size_t np = points.size();
  const std::size_t total = np * (np - (np > 0 ? 1 : 0)) / 2 * splits.size();
  auto two = [&](std::size_t x, std::size_t y, const std::array<int, 3>& s) {
    consider({points[x], points[y]}, {frac(s[0]), frac(s[1]), frac(s[2])});
  };
  if (evaluations + total <= cfg.max_evaluations) {
    for (std::size_t x = 0; x < np; ++x)
      for (std::size_t y = x + 1; y < np; ++y)
        for (const auto& s : splits) two(x, y, s);
  } else if (np >= 2) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<std::size_t> pick_split(0, splits.size() - 1);
    std::size_t attempts = 0;
    while (evaluations < cfg.max_evaluations && attempts++ < 4 * cfg.max_evaluations) {
      std::size_t x = pick(rng), y = pick(rng);
      if (x == y) continue;
      if (y < x) std::swap(x, y);
      two(x, y, splits[pick_split(rng)]);
    }
  }
  return best;
}

/// Upper bounds on the manipulation gain proved for Even-Paz.
inline Rational even_paz_gain_bound(std::size_t n) {
  if (n == 2 || n == 4) return {1, 2};
  if (n == 3 || n == 5) return {2, 3};
  return Rational(1) - Rational(2, static_cast<long>(n));
}

/// Upper bounds on the manipulation gain proved for modified Even-Paz.
inline Rational modified_even_paz_gain_bound(std::size_t n) {
  const long nn = static_cast<long>(n);
  Rational bound = Rational(1) - Rational(3, 2 * nn);
  if (n % 2 == 1) bound += Rational(1, 2 * nn * nn);
  return bound;
}

}  // namespace cake
