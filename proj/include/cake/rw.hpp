#pragma once

// Learning piecewise-constant valuations through cut queries, and lifting a
// direct-revelation mechanism into the query model.
//
// With N = floor(2k/eps) cuts of value eps/(2k) each, every learned cell
// [x_{j-1}, x_j] carries exactly the hidden mass eps/(2k); cells free of hidden
// breakpoints are reproduced exactly, so at most k cells disagree and the
// error on any piece is at most eps/2.

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cake/mechanisms.hpp"
#include "cake/oracle.hpp"

namespace cake {

struct LearnedValuation {
  Valuation w;
  std::size_t queries_used = 0;
  Rational epsilon;
  std::int64_t k = 0;
  std::vector<Rational> cut_points;  // x_1 .. x_N
};

inline std::int64_t learning_budget(std::int64_t k, const Rational& epsilon) {
  return (Rational(2 * k) / epsilon).floor_int();
}

inline LearnedValuation approximate_valuation(RWOracle& oracle, std::int64_t k, const Rational& epsilon) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be positive");
  const std::int64_t n_cuts = learning_budget(k, epsilon);
  const Rational step = epsilon / Rational(2 * k);
  const std::size_t before = oracle.query_count();

  std::vector<Rational> points{Rational(0)};
  std::vector<Rational> densities;
  for (std::int64_t j = 1; j <= n_cuts; ++j) {
    Rational x = oracle.cut(points.back(), step);
    if (!(points.back() < x)) throw std::logic_error("learned cell of zero length at " + x.str());
    densities.push_back(step / (x - points.back()));
    points.push_back(std::move(x));
  }
  if (points.back() != Rational(1)) {
    Rational rest = Rational(1) - step * Rational(n_cuts);
    densities.push_back(rest / (Rational(1) - points.back()));
    points.emplace_back(1);
  }
  std::vector<Rational> interior(points.begin() + 1, points.end() - 1);
  LearnedValuation out{Valuation(interior, std::move(densities)), oracle.query_count() - before, epsilon, k, {}};
  out.cut_points.assign(points.begin() + 1, points.begin() + 1 + n_cuts);
  return out;
}

struct LiftedRun {
  Allocation allocation;
  std::vector<LearnedValuation> learned;
  std::size_t total_queries = 0;
};

/// A direct-revelation mechanism driven through query oracles: learn each
/// agent's approximation, then run the direct mechanism on the approximations.
class LiftedMechanism {
 public:
  LiftedMechanism(Mechanism base, std::int64_t k, Rational epsilon)
      : base_(std::move(base)), k_(k), epsilon_(std::move(epsilon)) {
    if (base_.kind != MechanismKind::direct_revelation)
      throw std::invalid_argument("only direct-revelation mechanisms can be lifted");
  }

  LiftedRun run(std::span<RWOracle* const> oracles) const {
    LiftedRun out;
    std::vector<Valuation> approximations;
    for (RWOracle* o : oracles) {
      out.learned.push_back(approximate_valuation(*o, k_, epsilon_));
      out.total_queries += out.learned.back().queries_used;
      approximations.push_back(out.learned.back().w);
    }
    out.allocation = base_(Profile(std::move(approximations)));
    return out;
  }

  /// Simulates truthful agents answering from `p`.
  LiftedRun run(const Profile& p) const {
    std::vector<RWOracle> oracles;
    oracles.reserve(p.size());
    for (const auto& v : p.agents()) oracles.emplace_back(v);
    std::vector<RWOracle*> ptrs;
    for (auto& o : oracles) ptrs.push_back(&o);
    return run(ptrs);
  }

  [[nodiscard]] std::size_t query_bound(std::size_t n) const {
    return n * static_cast<std::size_t>(learning_budget(k_, epsilon_));
  }

  /// The lifted procedure viewed as a mechanism on (truthful) profiles.
  [[nodiscard]] Mechanism as_mechanism() const {
    LiftedMechanism self = *this;
    std::set<MechanismProperty> declared;
    if (base_.declares(MechanismProperty::contiguous)) declared.insert(MechanismProperty::contiguous);
    return {base_.name + "-rw", MechanismKind::query_driven,
            [self](const Profile& p) { return self.run(p).allocation; }, std::move(declared), std::nullopt};
  }

  [[nodiscard]] const Mechanism& base() const { return base_; }

 private:
  Mechanism base_;
  std::int64_t k_;
  Rational epsilon_;
};

inline LiftedMechanism lift_direct_to_rw(Mechanism m, std::int64_t k, Rational epsilon) {
  return {std::move(m), k, std::move(epsilon)};
}

}  // namespace cake
