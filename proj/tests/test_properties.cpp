#include <gtest/gtest.h>

#include <random>

#include "cake/ep_best_response.hpp"
#include "cake/properties.hpp"
#include "cake/random.hpp"
#include "cake/scenarios.hpp"

using namespace cake;

namespace {
Rational R(const char* s) { return Rational::parse(s); }

Mechanism constant_split() {
  return {"split-half", MechanismKind::direct_revelation,
          [](const Profile&) {
            return Allocation{{Piece(Rational(0), Rational(1, 2)), Piece(Rational(1, 2), Rational(1))}, {}};
          },
          {MechanismProperty::contiguous},
          std::nullopt};
}

// agent 0: 1/2 on [0,1/100], 49/100 on [1/100,1/2], 1/100 on [1/2,1]
Profile near_worst() {
  return Profile({Valuation::from_masses({R("1/100"), R("1/2")}, {R("1/2"), R("49/100"), R("1/100")}),
                  Valuation::uniform()});
}
}  // namespace

TEST(Report, EvenPazOnUniformAgents) {
  Profile p({Valuation::uniform(), Valuation::uniform()});
  PropertyReport r = check_properties(make_even_paz(), p);
  EXPECT_EQ(r.proportionality_deficit, R("0"));
  EXPECT_EQ(r.envy, R("0"));
  EXPECT_TRUE(r.contiguous);
  EXPECT_EQ(r.values, (std::vector<Rational>{R("1/2"), R("1/2")}));
}

TEST(Report, EqualSplitWastesNothing) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    Profile p = random_profile(rng, 3);
    EXPECT_EQ(check_properties(make_equal_split(), p).wasted_measure, R("0"));
  }
}

TEST(Report, WasteCountsCakeHeldByAgentsWhoDoNotWantIt) {
  Profile p({Valuation({R("1/2")}, {R("2"), R("0")}), Valuation::uniform()});
  Allocation a{{Piece(R("0"), R("1")), Piece()}, {}};
  EXPECT_EQ(wasted_measure(a, p), R("1/2"));
}

TEST(Gain, NearWorstFixtureMisreport) {
  Profile p = near_worst();
  GainCertificate c = evaluate_misreport(make_even_paz(), p, 0, Valuation::from_masses({R("49/100")}, {R("1/2"), R("1/2")}));
  EXPECT_EQ(c.truthful_value, R("1/2"));
  EXPECT_EQ(c.gain, R("48/100"));
  EXPECT_TRUE(verify_certificate(make_even_paz(), p, c));
  GainCertificate forged = c;
  forged.gain = R("1/2");
  EXPECT_FALSE(verify_certificate(make_even_paz(), p, forged));
}

TEST(Gain, ConstantMechanismCannotBeManipulated) {
  Profile p = near_worst();
  GainCertificate c = best_response_gain(constant_split(), p, 0);
  EXPECT_EQ(c.gain, R("0"));
}

TEST(Gain, DiscussionMisreport) {
  DiscussionExample ex = discussion_example();
  GainCertificate c = evaluate_misreport(make_mechanism("modified-ep-exchange"), ex.truthful, 1, ex.deviated[1]);
  EXPECT_EQ(c.truthful_value, R("1/2"));
  EXPECT_EQ(c.deviated_value, R("1"));
  EXPECT_EQ(c.gain, R("1/2"));
}

TEST(Gain, GridSearchIsDeterministic) {
  std::mt19937_64 rng(9);
  Profile p = random_profile(rng, 3);
  SearchConfig cfg;
  cfg.max_evaluations = 300;
  cfg.seed = 4;
  EXPECT_EQ(best_response_gain(make_even_paz(), p, 1, cfg), best_response_gain(make_even_paz(), p, 1, cfg));
}

TEST(EpExact, UniformAgentsCannotGain) {
  for (std::size_t n : {2u, 3u}) {
    Profile p(std::vector<Valuation>(n, Valuation::uniform()));
    EXPECT_EQ(ep_cutpoint_best_response(make_even_paz(), p, 0).certificate.gain, R("0"));
  }
}

TEST(EpExact, NearWorstFixture) {
  Profile p = near_worst();
  EpBestResponse br = ep_cutpoint_best_response(make_even_paz(), p, 0);
  EXPECT_TRUE(verify_certificate(make_even_paz(), p, br.certificate));
  EXPECT_GE(br.certificate.deviated_value, br.planned_value);
  EXPECT_GE(br.certificate.gain, R("48/100"));
  EXPECT_LT(br.certificate.gain, R("1/2"));
}

TEST(EpExact, RejectsOtherMechanisms) {
  Profile p = near_worst();
  EXPECT_THROW(ep_cutpoint_best_response(make_equal_split(), p, 0), not_ep_family);
  EXPECT_THROW(ep_cutpoint_best_response(make_mechanism("ep-exchange"), p, 0), not_ep_family);
}

TEST(EpExact, DominatesGridSearch) {
  std::mt19937_64 rng(21);
  SearchConfig cfg;
  cfg.max_evaluations = 400;
  for (const char* name : {"even-paz", "modified-ep"}) {
    Mechanism m = make_mechanism(name);
    for (int t = 0; t < 8; ++t) {
      Profile p = random_profile(rng, 2 + static_cast<std::size_t>(t % 3));
      EpBestResponse exact = ep_cutpoint_best_response(m, p, 0, cfg);
      GainCertificate grid = best_response_gain(m, p, 0, cfg);
      EXPECT_TRUE(verify_certificate(m, p, exact.certificate));
      EXPECT_GE(exact.certificate.gain, grid.gain) << name << " profile " << t;
    }
  }
}

TEST(Bounds, Values) {
  EXPECT_EQ(even_paz_gain_bound(2), R("1/2"));
  EXPECT_EQ(even_paz_gain_bound(5), R("2/3"));
  EXPECT_EQ(even_paz_gain_bound(8), R("3/4"));
  EXPECT_EQ(modified_even_paz_gain_bound(2), R("1/4"));
  EXPECT_EQ(modified_even_paz_gain_bound(3), R("5/9"));
}
