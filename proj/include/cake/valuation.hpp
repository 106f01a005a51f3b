#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/piece.hpp"
#include "cake/rational.hpp"

namespace cake {

class invalid_valuation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step-function density on [0,1]: density_j on [b_j, b_{j+1}], with
/// b_0 = 0 and b_{m+1} = 1. Always normalized and canonical (adjacent
/// segments carry distinct densities).
class PiecewiseConstantValuation {
 public:
  /// Uniform density 1.
  PiecewiseConstantValuation() : PiecewiseConstantValuation({}, {Rational(1)}) {}

  /// `breakpoints` are the interior points b_1 < ... < b_m; one density per
  /// segment. Throws invalid_valuation unless the total mass is exactly 1.
  PiecewiseConstantValuation(const std::vector<Rational>& breakpoints, std::vector<Rational> densities) {
    if (densities.size() != breakpoints.size() + 1)
      throw invalid_valuation("expected " + std::to_string(breakpoints.size() + 1) + " densities, got " +
                              std::to_string(densities.size()));
    bounds_.reserve(breakpoints.size() + 2);
    bounds_.emplace_back(0);
    for (const auto& b : breakpoints) {
      if (!(bounds_.back() < b) || !(b < Rational(1)))
        throw invalid_valuation("breakpoints must be strictly increasing inside (0,1); got " + b.str());
      bounds_.push_back(b);
    }
    bounds_.emplace_back(1);
    for (const auto& d : densities)
      if (d.sign() < 0) throw invalid_valuation("negative density " + d.str());
    densities_ = std::move(densities);
    canonicalize();
    if (prefix_.back() != Rational(1))
      throw invalid_valuation("valuation is not normalized: total mass " + prefix_.back().str());
  }

  static PiecewiseConstantValuation uniform() { return {}; }

  /// Rescales densities so that the total mass is 1.
  static PiecewiseConstantValuation normalize(const std::vector<Rational>& breakpoints,
                                              std::vector<Rational> densities) {
    if (densities.size() != breakpoints.size() + 1) throw invalid_valuation("density count mismatch");
    Rational total;
    Rational prev(0);
    for (std::size_t j = 0; j < densities.size(); ++j) {
      Rational next = j < breakpoints.size() ? breakpoints[j] : Rational(1);
      total += densities[j] * (next - prev);
      prev = next;
    }
    if (total.sign() <= 0) throw invalid_valuation("cannot normalize a valuation with zero mass");
    for (auto& d : densities) d /= total;
    return {breakpoints, std::move(densities)};
  }

  /// Builds from segment masses instead of densities; segments must have
  /// positive length. Masses must sum to 1.
  static PiecewiseConstantValuation from_masses(const std::vector<Rational>& breakpoints,
                                                const std::vector<Rational>& masses) {
    if (masses.size() != breakpoints.size() + 1) throw invalid_valuation("mass count mismatch");
    std::vector<Rational> densities;
    densities.reserve(masses.size());
    Rational prev(0);
    for (std::size_t j = 0; j < masses.size(); ++j) {
      Rational next = j < breakpoints.size() ? breakpoints[j] : Rational(1);
      if (!(prev < next)) throw invalid_valuation("segments must have positive length");
      densities.push_back(masses[j] / (next - prev));
      prev = next;
    }
    return {breakpoints, std::move(densities)};
  }

  /// Interior breakpoints b_1..b_m.
  [[nodiscard]] std::vector<Rational> breakpoints() const {
    return {bounds_.begin() + 1, bounds_.end() - 1};
  }
  /// 0, b_1, ..., b_m, 1.
  [[nodiscard]] const std::vector<Rational>& bounds() const { return bounds_; }
  [[nodiscard]] const std::vector<Rational>& densities() const { return densities_; }
  [[nodiscard]] std::size_t segment_count() const { return densities_.size(); }

  [[nodiscard]] bool is_hungry() const {
    return std::all_of(densities_.begin(), densities_.end(), [](const Rational& d) { return d.sign() > 0; });
  }

  /// Index of the segment containing x, taking the right segment at a breakpoint.
  [[nodiscard]] std::size_t segment_of(const Rational& x) const {
    auto it = std::upper_bound(bounds_.begin() + 1, bounds_.end() - 1, x);
    return static_cast<std::size_t>(it - bounds_.begin()) - 1;
  }

  /// Density on the open cell (lo, hi); the cell must not contain a breakpoint.
  [[nodiscard]] const Rational& density_on(const Rational& lo, const Rational& hi) const {
    return densities_[segment_of((lo + hi) / Rational(2))];
  }

  /// V([0, x]).
  [[nodiscard]] Rational cumulative(const Rational& x) const {
    if (!(Rational(0) < x)) return {};
    if (!(x < Rational(1))) return prefix_.back();
    std::size_t j = segment_of(x);
    return prefix_[j] + densities_[j] * (x - bounds_[j]);
  }

  /// V([x, y]).
  [[nodiscard]] Rational value(const Rational& x, const Rational& y) const { return cumulative(y) - cumulative(x); }

  [[nodiscard]] Rational value_of(const Piece& piece) const {
    Rational v;
    for (const auto& iv : piece.intervals()) v += value(iv.lo, iv.hi);
    return v;
  }

  /// Leftmost y >= x with V([x, y]) = r. Throws std::domain_error when r
  /// exceeds V([x, 1]) or is negative.
  [[nodiscard]] Rational cut(const Rational& x, const Rational& r) const {
    if (r.sign() < 0) throw std::domain_error("cut with negative target " + r.str());
    if (r.is_zero()) return x;
    if (r > value(x, Rational(1)))
      throw std::domain_error("infeasible cut: target " + r.str() + " exceeds remaining value " +
                              value(x, Rational(1)).str());
    Rational target = cumulative(x) + r;
    // first segment whose right end reaches the target; it has positive density
    auto it = std::lower_bound(prefix_.begin() + 1, prefix_.end(), target);
    std::size_t j = static_cast<std::size_t>(it - prefix_.begin()) - 1;
    return bounds_[j] + (target - prefix_[j]) / densities_[j];
  }

  /// Image under x -> 1 - x.
  [[nodiscard]] PiecewiseConstantValuation mirrored() const {
    std::vector<Rational> bps;
    for (auto it = bounds_.rbegin() + 1; it + 1 != bounds_.rend(); ++it) bps.push_back(Rational(1) - *it);
    return {bps, std::vector<Rational>(densities_.rbegin(), densities_.rend())};
  }

  /// Pieces where the density is zero / positive.
  [[nodiscard]] Piece zero_piece() const { return support(false); }
  [[nodiscard]] Piece positive_piece() const { return support(true); }

  friend bool operator==(const PiecewiseConstantValuation& a, const PiecewiseConstantValuation& b) {
    return a.bounds_ == b.bounds_ && a.densities_ == b.densities_;
  }

 private:
  void canonicalize() {
    std::vector<Rational> bounds{bounds_.front()};
    std::vector<Rational> dens{densities_.front()};
    for (std::size_t j = 1; j < densities_.size(); ++j) {
      if (densities_[j] == dens.back()) continue;
      bounds.push_back(bounds_[j]);
      dens.push_back(densities_[j]);
    }
    bounds.emplace_back(1);
    bounds_ = std::move(bounds);
    densities_ = std::move(dens);
    prefix_.assign(1, Rational(0));
    for (std::size_t j = 0; j < densities_.size(); ++j)
      prefix_.push_back(prefix_.back() + densities_[j] * (bounds_[j + 1] - bounds_[j]));
  }

  [[nodiscard]] Piece support(bool positive) const {
    std::vector<Interval> out;
    for (std::size_t j = 0; j < densities_.size(); ++j)
      if ((densities_[j].sign() > 0) == positive) out.emplace_back(bounds_[j], bounds_[j + 1]);
    return Piece(std::move(out));
  }

  std::vector<Rational> bounds_;
  std::vector<Rational> densities_;
  std::vector<Rational> prefix_;  // prefix_[j] = V([0, b_j])
};

using Valuation = PiecewiseConstantValuation;

inline Rational value_of(const Valuation& v, const Piece& x) { return v.value_of(x); }
inline bool is_hungry(const Valuation& v) { return v.is_hungry(); }

/// A valuation profile: one normalized valuation per agent, n >= 2.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<Valuation> agents) : agents_(std::move(agents)) {
    if (agents_.size() < 2) throw std::invalid_argument("a profile needs at least two agents");
  }

  [[nodiscard]] std::size_t size() const { return agents_.size(); }
  [[nodiscard]] const Valuation& operator[](std::size_t i) const { return agents_.at(i); }
  [[nodiscard]] const std::vector<Valuation>& agents() const { return agents_; }

  /// Same profile with agent i reporting `v` instead.
  [[nodiscard]] Profile with(std::size_t i, Valuation v) const {
    Profile p = *this;
    p.agents_.at(i) = std::move(v);
    return p;
  }

  /// Union of every agent's bounds (0 and 1 included), sorted and unique.
  [[nodiscard]] std::vector<Rational> grid() const {
    std::vector<Rational> pts;
    for (const auto& v : agents_) pts.insert(pts.end(), v.bounds().begin(), v.bounds().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::vector<Valuation> agents_;
};

}  // namespace cake
