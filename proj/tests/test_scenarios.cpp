#include <gtest/gtest.h>

#include "cake/scenarios.hpp"

using namespace cake;

namespace {
Rational R(const char* s) { return Rational::parse(s); }

ChainParameters params(std::size_t n, const char* e1, const char* e2) { return {n, R(e1), R(e2), {}}; }

// keeps [0,1/4] and [1/2,3/4] and throws the rest away
Mechanism wasteful() {
  return {"wasteful", MechanismKind::direct_revelation,
          [](const Profile& p) {
            Allocation a;
            a.pieces.assign(p.size(), Piece());
            a.pieces[0] = Piece(R("0"), R("1/4"));
            a.pieces[1] = Piece(R("1/2"), R("3/4"));
            a.discarded = piece_union(Piece(R("1/4"), R("1/2")), Piece(R("3/4"), R("1")));
            return a;
          },
          {},
          std::nullopt};
}

Mechanism split_half() {
  return {"split-half", MechanismKind::direct_revelation,
          [](const Profile&) { return Allocation{{Piece(R("0"), R("1/2")), Piece(R("1/2"), R("1"))}, {}}; },
          {MechanismProperty::contiguous},
          std::nullopt};
}

// Even-Paz run on the mirrored cake: on (u,u) agent 1 ends up with the left half
Mechanism mirrored_even_paz() {
  return {"mirrored-even-paz", MechanismKind::direct_revelation,
          [](const Profile& p) {
            std::vector<Valuation> m;
            for (const auto& v : p.agents()) m.push_back(v.mirrored());
            return even_paz(Profile(m)).mirrored();
          },
          {MechanismProperty::contiguous, MechanismProperty::proportional},
          std::nullopt};
}
}  // namespace

TEST(Discussion, ExpectedWitnessReproduces) {
  DiscussionExample ex = discussion_example();
  Mechanism m = make_mechanism("modified-ep-exchange");
  EXPECT_TRUE(verify_witness(m, ex.expected));
  auto w = discussion_chain(m);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->certificate->truthful_value, R("1/2"));
  EXPECT_EQ(w->certificate->deviated_value, R("1"));
  EXPECT_EQ(w->certificate->gain, R("1/2"));
  EXPECT_EQ(*w->certificate, *ex.expected.certificate);
}

TEST(Discussion, WitnessFailsAgainstOtherMechanism) {
  DiscussionExample ex = discussion_example();
  EXPECT_FALSE(verify_witness(make_modified_even_paz(), ex.expected));
}

TEST(Thm1, DeltaBound) {
  EXPECT_EQ(thm1_delta_bound(2, R("1/12"), R("1/12")), R("2/9"));
  auto w = thm1_chain(make_equal_split(), params(2, "1/12", "1/12"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->parameters.at("delta"), R("1/9"));
}

TEST(Thm1, EqualSplitYieldsVerifiedWitness) {
  Mechanism m = make_equal_split();
  for (std::size_t n : {2u, 3u, 4u}) {
    auto w = thm1_chain(m, params(n, "0", "0"));
    ASSERT_TRUE(w) << n;
    EXPECT_EQ(w->violated, ViolationKind::strategyproofness);
    EXPECT_TRUE(verify_witness(m, *w));
  }
}

TEST(Thm1, TwoAgentsWitnessIsTheLargerPieceHolder) {
  ChainParameters p = params(2, "0", "0");
  p.delta_overrides["delta"] = R("1/4");
  auto w = thm1_chain(make_equal_split(), p);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->certificate->agent, 0u);
  EXPECT_EQ(w->certificate->gain, R("1/2"));
  EXPECT_EQ(w->profiles.size(), 2u);
}

TEST(Thm1, WastefulMechanismIsCaughtFirst) {
  auto w = thm1_chain(wasteful(), params(2, "0", "0"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->violated, ViolationKind::non_wastefulness);
  EXPECT_EQ(w->profile_index, 0u);
  EXPECT_TRUE(verify_witness(wasteful(), *w));
}

TEST(Thm1, InfeasibleParameters) {
  EXPECT_THROW(thm1_chain(make_equal_split(), params(2, "1/6", "0")), infeasible_parameters);
  ChainParameters p = params(2, "0", "0");
  p.delta_overrides["delta"] = R("1/2");
  EXPECT_THROW(thm1_chain(make_equal_split(), p), infeasible_parameters);
}

TEST(Prop1, EvenPazWitnesses) {
  Mechanism m = make_even_paz();
  for (const char* e1 : {"0", "1/5", "2/5"}) {
    auto w = prop1_chain(m, params(2, e1, "0"));
    ASSERT_TRUE(w) << e1;
    EXPECT_TRUE(verify_witness(m, *w));
    EXPECT_GT(w->certificate->gain, R(e1));
  }
}

TEST(Prop1, DefaultDeltasForLargeEps1) {
  auto w = prop1_chain(make_even_paz(), params(2, "2/5", "0"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->parameters.at("c1"), R("1/2"));
  EXPECT_EQ(w->parameters.at("delta3"), R("1/40"));
  EXPECT_EQ(w->parameters.at("delta5"), R("1/20"));
  EXPECT_EQ(w->certificate->agent, 0u);
  EXPECT_EQ(w->certificate->gain, R("9/20"));
}

TEST(Prop1, DefaultDeltasAlwaysFeasible) {
  const char* eps[] = {"0", "1/10", "1/5", "1/3", "2/5", "49/100"};
  const char* cuts[] = {"1/2", "3/5", "3/4", "9/10", "99/100"};
  for (const char* e1 : eps)
    for (const char* e2 : eps) {
      if (!(R(e1) + R(e2) < R("1/2"))) continue;
      for (const char* c : cuts) {
        auto d = prop1_default_deltas(R(c), R(e1), R(e2));
        EXPECT_NO_THROW(prop1_check_deltas(d, R(c), R(e1), R(e2))) << e1 << " " << e2 << " " << c;
      }
    }
}

TEST(Prop1, ConstantSplitIsCaught) {
  auto w = prop1_chain(split_half(), params(2, "0", "0"));
  ASSERT_TRUE(w);
  EXPECT_TRUE(verify_witness(split_half(), *w));
}

TEST(Prop1, MirrorPath) {
  Mechanism m = mirrored_even_paz();
  auto w = prop1_chain(m, params(2, "1/5", "0"));
  ASSERT_TRUE(w);
  EXPECT_TRUE(verify_witness(m, *w));
  EXPECT_EQ(w->parameters.at("swap") + w->parameters.at("mirror"), R("1"));
}

TEST(Prop1, RejectsBadParameters) {
  EXPECT_THROW(prop1_chain(make_even_paz(), params(3, "0", "0")), infeasible_parameters);
  EXPECT_THROW(prop1_chain(make_even_paz(), params(2, "1/4", "1/4")), infeasible_parameters);
}

TEST(Thm2, RProfileAndB) {
  Valuation r = thm2_r(3, R("0"));
  EXPECT_EQ(r.bounds(), (std::vector<Rational>{R("0"), R("1/9"), R("4/9"), R("1")}));
  EXPECT_EQ(r.densities()[1], R("3"));
  EXPECT_EQ(thm2_b(3, R("0"), R("1/2"), R("2/3")), R("11/18"));
  for (const char* e : {"0", "1/10", "1/5", "3/10"}) EXPECT_EQ(thm2_r(3, R(e)).value(R("0"), R("1")), R("1"));
}

TEST(Thm2, EvenPazWitnesses) {
  Mechanism m = make_even_paz();
  for (std::size_t n : {3u, 4u}) {
    auto w = thm2_chain(m, params(n, "0", "0"));
    ASSERT_TRUE(w) << n;
    EXPECT_TRUE(verify_witness(m, *w));
    EXPECT_GT(w->certificate->gain, R("0"));
  }
  auto w = thm2_chain(m, params(3, "0", "0"));
  EXPECT_EQ(w->parameters.at("c1"), R("2/9"));
  EXPECT_EQ(w->parameters.at("c2"), R("11/18"));
}

TEST(Thm2, RejectsBadParameters) {
  EXPECT_THROW(thm2_chain(make_even_paz(), params(2, "0", "0")), infeasible_parameters);
  EXPECT_THROW(thm2_chain(make_even_paz(), params(3, "0", "1/3")), infeasible_parameters);
}

TEST(WorstCase, FixtureGains) {
  Mechanism m = make_even_paz();
  for (std::size_t n : {2u, 3u}) {
    WorstCaseFixture f = ep_worstcase_fixture(n, R("1/50"));
    GainCertificate c = evaluate_misreport(m, f.profile, f.agent, f.misreport);
    EXPECT_GE(c.gain, f.expected_gain_lower_bound);
    EXPECT_GE(c.gain, Rational(1) - Rational(1, static_cast<long>(n)) - R("1/25"));
  }
  EXPECT_THROW(ep_worstcase_fixture(2, R("1/4")), infeasible_parameters);
  EXPECT_THROW(ep_worstcase_fixture(4, R("1/50")), infeasible_parameters);
}

TEST(Witness, TamperedWitnessFails) {
  auto w = thm1_chain(make_equal_split(), params(2, "0", "0"));
  ASSERT_TRUE(w);
  ViolationWitness bad = *w;
  bad.certificate->deviated_value = R("3/4");
  EXPECT_FALSE(verify_witness(make_equal_split(), bad));
}
