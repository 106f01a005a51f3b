#pragma once

// Intervals of the unit cake and finite unions of them.
//
// Intervals are closed. Two pieces that differ on finitely many points are
// the same piece: zero-length intervals are dropped and touching intervals
// are merged, so the canonical form is unique and equality is structural.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/rational.hpp"

namespace cake {

struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo < Rational(0) || hi > Rational(1) || hi < lo)
      throw std::invalid_argument("interval [" + lo.str() + ", " + hi.str() + "] outside the cake");
  }

  [[nodiscard]] Rational length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class Piece {
 public:
  Piece() = default;
  explicit Piece(std::vector<Interval> intervals) : intervals_(std::move(intervals)) { canonicalize(); }
  Piece(Rational lo, Rational hi) : Piece(std::vector<Interval>{Interval(std::move(lo), std::move(hi))}) {}

  static Piece whole() { return Piece(Rational(0), Rational(1)); }

  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] bool contiguous() const { return intervals_.size() <= 1; }

  [[nodiscard]] Rational measure() const {
    Rational m;
    for (const auto& iv : intervals_) m += iv.length();
    return m;
  }

  /// Image under x -> 1 - x.
  [[nodiscard]] Piece mirrored() const {
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (const auto& iv : intervals_) out.emplace_back(Rational(1) - iv.hi, Rational(1) - iv.lo);
    return Piece(std::move(out));
  }

  /// True when [lo, hi] is covered up to finitely many points.
  [[nodiscard]] bool covers(const Rational& lo, const Rational& hi) const {
    if (!(lo < hi)) return true;
    for (const auto& iv : intervals_)
      if (iv.lo <= lo && hi <= iv.hi) return true;
    return false;
  }

  [[nodiscard]] std::string str() const {
    if (intervals_.empty()) return "{}";
    std::string s;
    for (const auto& iv : intervals_) {
      if (!s.empty()) s += " u ";
      s += "[" + iv.lo.str() + ", " + iv.hi.str() + "]";
    }
    return s;
  }

  friend bool operator==(const Piece&, const Piece&) = default;

 private:
  void canonicalize() {
    std::erase_if(intervals_, [](const Interval& iv) { return !(iv.lo < iv.hi); });
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (auto& iv : intervals_) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
      } else {
        merged.push_back(std::move(iv));
      }
    }
    intervals_ = std::move(merged);
  }

  std::vector<Interval> intervals_;
};

inline Piece piece_union(const Piece& a, const Piece& b) {
  std::vector<Interval> all = a.intervals();
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return Piece(std::move(all));
}

inline Piece piece_intersect(const Piece& a, const Piece& b) {
  std::vector<Interval> out;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    Rational lo = max(x[i].lo, y[j].lo);
    Rational hi = min(x[i].hi, y[j].hi);
    if (lo < hi) out.emplace_back(lo, hi);
    if (x[i].hi < y[j].hi) ++i; else ++j;
  }
  return Piece(std::move(out));
}

inline Piece piece_subtract(const Piece& a, const Piece& b) {
  std::vector<Interval> out;
  for (const auto& iv : a.intervals()) {
    Rational cursor = iv.lo;
    for (const auto& cut : b.intervals()) {
      if (!(cut.lo < iv.hi)) break;
      if (!(cursor < cut.hi)) continue;
      if (cursor < cut.lo) out.emplace_back(cursor, cut.lo);
      cursor = max(cursor, cut.hi);
    }
    if (cursor < iv.hi) out.emplace_back(cursor, iv.hi);
  }
  return Piece(std::move(out));
}

}  // namespace cake
