#include <gtest/gtest.h>

#include <random>

#include "cake/random.hpp"
#include "cake/rw.hpp"

using namespace cake;

namespace {
Rational R(const char* s) { return Rational::parse(s); }
}  // namespace

TEST(Learn, UniformIsLearnedExactly) {
  RWOracle o(Valuation::uniform());
  LearnedValuation l = approximate_valuation(o, 1, R("1/2"));
  EXPECT_EQ(l.queries_used, 4u);
  EXPECT_EQ(l.w, Valuation::uniform());
  EXPECT_EQ(l.cut_points.back(), R("1"));
}

TEST(Learn, BudgetAndLeftoverSegment) {
  // 2k/eps = 2/(2/5) = 5 cuts of 1/5 each
  EXPECT_EQ(learning_budget(1, R("2/5")), 5);
  // 2k/eps = 6/(4/5) = 7.5 -> 7 cuts of 2/15, leaving 1/15 for the tail
  Valuation v({R("1/3"), R("2/3")}, {R("1/2"), R("2"), R("1/2")});
  RWOracle o(v);
  LearnedValuation l = approximate_valuation(o, 3, R("4/5"));
  EXPECT_EQ(l.queries_used, 7u);
  EXPECT_EQ(l.w.value(R("0"), R("1")), R("1"));
  EXPECT_EQ(l.w.value(l.cut_points.back(), R("1")), R("1/15"));
}

TEST(Learn, ErrorOnPiecesStaysWithinHalfEpsilon) {
  std::mt19937_64 rng(3);
  RandomProfileConfig cfg;
  cfg.max_breakpoints = 3;
  for (int t = 0; t < 40; ++t) {
    Valuation v = random_valuation(rng, cfg);
    const auto k = static_cast<std::int64_t>(v.breakpoints().size()) + 1;
    RWOracle o(v);
    LearnedValuation l = approximate_valuation(o, k, R("1/2"));
    std::vector<Rational> grid = v.bounds();
    for (const auto& x : l.w.bounds()) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        Rational err = abs(l.w.value(grid[i], grid[j]) - v.value(grid[i], grid[j]));
        EXPECT_LE(err, R("1/4"));
      }
  }
}

TEST(Learn, RejectsBadArguments) {
  RWOracle o(Valuation::uniform());
  EXPECT_THROW(approximate_valuation(o, 0, R("1/2")), std::invalid_argument);
  EXPECT_THROW(approximate_valuation(o, 1, R("0")), std::invalid_argument);
}

TEST(Lift, QueryCountAndApproximateProportionality) {
  LiftedMechanism lifted = lift_direct_to_rw(make_modified_even_paz(), 3, R("1/5"));
  Profile p({Valuation({R("1/2")}, {R("3/2"), R("1/2")}), Valuation::uniform(), Valuation({R("1/3")}, {R("0"), R("3/2")})});
  LiftedRun run = lifted.run(p);
  EXPECT_EQ(run.total_queries, 90u);
  EXPECT_EQ(lifted.query_bound(3), 90u);
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_GE(p[i].value_of(run.allocation.pieces[i]), R("1/3") - R("1/10"));
}

TEST(Lift, OnlyDirectMechanisms) {
  Mechanism q = lift_direct_to_rw(make_even_paz(), 2, R("1/2")).as_mechanism();
  EXPECT_EQ(q.name, "even-paz-rw");
  EXPECT_THROW(lift_direct_to_rw(q, 2, R("1/2")), std::invalid_argument);
}
