#include <gtest/gtest.h>

#include <random>

#include "cake/mechanisms.hpp"
#include "cake/properties.hpp"
#include "cake/random.hpp"

using namespace cake;

namespace {
Rational R(const char* s) { return Rational::parse(s); }

Profile discussion_profile() {
  return Profile({Valuation({R("1/2")}, {R("0"), R("2")}), Valuation({R("1/2"), R("4/5")}, {R("1"), R("0"), R("5/2")})});
}
}  // namespace

TEST(EvenPaz, TwoUniformAgentsSplitAtHalf) {
  Profile p({Valuation::uniform(), Valuation::uniform()});
  Allocation a = even_paz(p);
  EXPECT_EQ(a.pieces[0], Piece(R("0"), R("1/2")));
  EXPECT_EQ(a.pieces[1], Piece(R("1/2"), R("1")));
}

TEST(EvenPaz, TiesGoLeftByIndex) {
  // both agents cut at 1/2; agent 0 is ordered first and takes the left half
  Valuation skewed = Valuation::from_masses({R("1/4"), R("1/2")}, {R("1/8"), R("3/8"), R("1/2")});
  Allocation a = even_paz(Profile({Valuation::uniform(), skewed}));
  EXPECT_EQ(a.pieces[0], Piece(R("0"), R("1/2")));
  Allocation b = even_paz(Profile({skewed, Valuation::uniform()}));
  EXPECT_EQ(b.pieces[0], Piece(R("0"), R("1/2")));
}

TEST(EvenPaz, ThreeAgentsTrace) {
  Profile p({Valuation::uniform(), Valuation::uniform(), Valuation::uniform()});
  std::vector<EpNode> trace;
  Allocation a = even_paz(p, &trace);
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.front().left_size, 1u);
  EXPECT_EQ(trace.front().cuts.front(), R("1/3"));
  EXPECT_EQ(a.pieces[0], Piece(R("0"), R("1/3")));
  EXPECT_EQ(a.pieces[1], Piece(R("1/3"), R("2/3")));
  EXPECT_EQ(a.pieces[2], Piece(R("2/3"), R("1")));
}

TEST(ModifiedEvenPaz, MiddleIsSplitAmongEveryone) {
  Profile p = discussion_profile();
  std::vector<EpNode> trace;
  Allocation a = modified_even_paz(p, &trace);
  // cuts: agent 1 at 1/2, agent 0 at 3/4; agent 1 values the middle at 0 and cuts it at its left end
  ASSERT_GE(trace.size(), 2u);
  EXPECT_TRUE(trace[1].inner);
  EXPECT_EQ(trace[1].a, R("1/2"));
  EXPECT_EQ(trace[1].b, R("3/4"));
  EXPECT_EQ(a.pieces[0], Piece(R("1/2"), R("1")));
  EXPECT_EQ(a.pieces[1], Piece(R("0"), R("1/2")));
  PropertyReport r = report_properties(a, p);
  EXPECT_TRUE(r.proportional());
}

TEST(ModifiedEvenPaz, EqualsEvenPazWhenCutsCoincide) {
  Profile p({Valuation::uniform(), Valuation::uniform()});
  EXPECT_EQ(modified_even_paz(p), even_paz(p));
}

TEST(EqualSplit, SplitsEachCellAmongDesiringAgents) {
  Profile p({Valuation({R("1/2")}, {R("2"), R("0")}), Valuation::uniform()});
  Allocation a = equal_split_nonwasteful(p);
  EXPECT_EQ(a.pieces[0], Piece(R("0"), R("1/4")));
  EXPECT_EQ(a.pieces[1], Piece(R("1/4"), R("1")));
  EXPECT_EQ(wasted_measure(a, p), R("0"));
}

TEST(EqualSplit, DiscardsCakeNobodyWants) {
  Valuation left({R("1/2")}, {R("2"), R("0")});
  Profile p({left, left});
  Allocation a = equal_split_nonwasteful(p);
  EXPECT_EQ(a.discarded, Piece(R("1/2"), R("1")));
  EXPECT_TRUE(validate_allocation(a, p).empty());
}

TEST(Exchange, ZeroPiecesMoveToLowestIndexDesirer) {
  Profile p = discussion_profile();
  Allocation base{{Piece(R("0"), R("1/2")), Piece(R("1/2"), R("1"))}, {}};
  Allocation a = exchange_zero_pieces(base, p);
  // agent 0 has density 0 on [0,1/2]: goes to agent 1; agent 1 has 0 on [1/2,4/5]: goes to agent 0
  EXPECT_EQ(a.pieces[0], Piece(R("1/2"), R("4/5")));
  EXPECT_EQ(a.pieces[1], piece_union(Piece(R("0"), R("1/2")), Piece(R("4/5"), R("1"))));
}

TEST(Registry, KnowsEveryName) {
  for (const auto& name : mechanism_names()) EXPECT_EQ(make_mechanism(name).name, name);
  EXPECT_THROW(make_mechanism("dictator"), unknown_mechanism);
  EXPECT_TRUE(make_mechanism("even-paz").declares(MechanismProperty::contiguous));
  EXPECT_TRUE(make_mechanism("equal-split").declares(MechanismProperty::non_wasteful));
}

TEST(EvenPaz, QueryModelMatchesDirectRun) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    Profile p = random_profile(rng, 4);
    std::vector<RWOracle> oracles;
    for (const auto& v : p.agents()) oracles.emplace_back(v);
    std::vector<RWOracle*> ptrs;
    for (auto& o : oracles) ptrs.push_back(&o);
    EXPECT_EQ(even_paz_queries(ptrs), even_paz(p));
  }
}

TEST(EvenPaz, RandomProfilesStayProportionalAndContiguous) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 6; ++n)
    for (int t = 0; t < 30; ++t) {
      Profile p = random_profile(rng, n);
      Allocation a = even_paz(p);
      EXPECT_TRUE(a.contiguous());
      EXPECT_TRUE(report_properties(a, p).proportional());
      for (const auto& v : validate_allocation(a, p))
        EXPECT_NE(v.kind, AllocationViolation::Kind::overlap) << v.describe();
    }
}
