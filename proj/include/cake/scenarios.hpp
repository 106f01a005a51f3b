#pragma once

// Impossibility-proof constructions run against concrete mechanisms.
//
// Each chain builds the adversarial profiles step by step from the
// mechanism's own outputs and stops at the first violation it can certify
// by re-running the mechanism. Labelings the constructions fix "without loss
// of generality" are detected from the first outcome and realized by
// swapping agents and/or mirroring the cake; the profiles stored in a
// witness are always in the mechanism's own frame.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/allocation.hpp"
#include "cake/mechanisms.hpp"
#include "cake/properties.hpp"

namespace cake {

class infeasible_parameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ViolationKind { strategyproofness, proportionality, non_wastefulness, contiguity, free_disposal };

inline std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::strategyproofness: return "strategyproofness";
    case ViolationKind::proportionality: return "proportionality";
    case ViolationKind::non_wastefulness: return "non-wastefulness";
    case ViolationKind::contiguity: return "contiguity";
    case ViolationKind::free_disposal: return "free-disposal";
  }
  return {};
}

inline ViolationKind violation_kind_from_string(const std::string& s) {
  for (auto k : {ViolationKind::strategyproofness, ViolationKind::proportionality, ViolationKind::non_wastefulness,
                 ViolationKind::contiguity, ViolationKind::free_disposal})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown violation kind \"" + s + "\"");
}

struct ViolationWitness {
  std::string chain;      // thm1 | prop1 | thm2 | discussion
  std::string mechanism;  // name the mechanism was run under
  std::vector<Profile> profiles;
  ViolationKind violated = ViolationKind::strategyproofness;
  Rational threshold;           // the epsilon the finding exceeds
  std::size_t profile_index = 0;  // truthful profile of the certificate, or the profile reported on
  std::optional<GainCertificate> certificate;
  std::optional<PropertyReport> report;
  std::map<std::string, Rational> parameters;
  std::string summary;
};

struct ChainParameters {
  std::size_t n = 2;
  Rational eps1;  // strategyproofness slack
  Rational eps2;  // proportionality slack
  std::map<std::string, Rational> delta_overrides;
};

/// Measure of cake some agent desires that is discarded or not allocated at all.
inline Rational desired_unallocated(const Allocation& a, const Profile& p) {
  Piece held;
  for (const auto& piece : a.pieces) held = piece_union(held, piece);
  Piece loose = piece_subtract(Piece::whole(), held);
  Piece desired;
  for (const auto& v : p.agents()) desired = piece_union(desired, v.positive_piece());
  return piece_intersect(loose, desired).measure();
}

/// Re-runs the mechanism and checks the witness's finding exactly.
inline bool verify_witness(const Mechanism& m, const ViolationWitness& w) {
  if (w.profile_index >= w.profiles.size()) return false;
  const Profile& p = w.profiles[w.profile_index];
  if (w.violated == ViolationKind::strategyproofness) {
    return w.certificate && verify_certificate(m, p, *w.certificate) && w.certificate->gain > w.threshold;
  }
  if (!w.report) return false;
  Allocation a = m(p);
  if (!(report_properties(a, p) == *w.report)) return false;
  switch (w.violated) {
    case ViolationKind::proportionality: return w.report->proportionality_deficit > w.threshold;
    case ViolationKind::non_wastefulness: return w.report->wasted_measure > w.threshold;
    case ViolationKind::contiguity: return !w.report->contiguous;
    case ViolationKind::free_disposal: {
      auto it = w.parameters.find("desired_unallocated");
      Rational lost = desired_unallocated(a, p);
      return it != w.parameters.end() && it->second == lost && lost > w.threshold;
    }
    default: return false;
  }
}

/// Density `density` on each listed piece and 0 elsewhere; pieces must be
/// disjoint and the result normalized.
inline Valuation step_valuation(const std::vector<std::pair<Piece, Rational>>& parts) {
  std::vector<std::pair<Interval, Rational>> cells;
  for (const auto& [piece, d] : parts)
    for (const auto& iv : piece.intervals()) cells.emplace_back(iv, d);
  std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
  std::vector<Rational> bps, dens;
  Rational cursor(0);
  for (const auto& [iv, d] : cells) {
    if (cursor < iv.lo) {
      if (cursor > Rational(0)) bps.push_back(cursor);
      dens.emplace_back(0);
      cursor = iv.lo;
    }
    if (cursor > Rational(0)) bps.push_back(cursor);
    dens.push_back(d);
    cursor = iv.hi;
  }
  if (cursor < Rational(1)) {
    if (cursor > Rational(0)) bps.push_back(cursor);
    dens.emplace_back(0);
  }
  return {bps, std::move(dens)};
}

/// Density 1/|X| on X.
inline Valuation uniform_on(const Piece& x) { return step_valuation({{x, Rational(1) / x.measure()}}); }

/// Swaps agents 0 and 1 and/or mirrors the cake; both are involutions.
struct Frame {
  bool swap = false;
  bool mirror = false;

  [[nodiscard]] std::size_t agent(std::size_t i) const {
    if (!swap || i > 1) return i;
    return 1 - i;
  }
  [[nodiscard]] Valuation valuation(const Valuation& v) const { return mirror ? v.mirrored() : v; }
  [[nodiscard]] Profile profile(const Profile& p) const {
    std::vector<Valuation> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[agent(i)] = valuation(p[i]);
    return Profile(std::move(out));
  }
  [[nodiscard]] Allocation allocation(const Allocation& a) const {
    Allocation m = mirror ? a.mirrored() : a;
    Allocation out = m;
    for (std::size_t i = 0; i < a.size(); ++i) out.pieces[agent(i)] = m.pieces[i];
    return out;
  }
};

namespace detail {

/// Shared bookkeeping for one chain execution against one mechanism.
class ChainRun {
 public:
  ChainRun(const Mechanism& m, std::string chain) : m_(m) {
    base_.chain = std::move(chain);
    base_.mechanism = m.name;
  }

  std::size_t add(Profile p) {
    base_.profiles.push_back(std::move(p));
    return base_.profiles.size() - 1;
  }
  const Profile& profile(std::size_t idx) const { return base_.profiles.at(idx); }
  Allocation run(std::size_t idx) const { return m_(profile(idx)); }
  void param(const std::string& key, Rational value) { base_.parameters[key] = std::move(value); }

  std::optional<ViolationWitness> property(std::size_t idx, ViolationKind kind, const Rational& threshold,
                                           const std::string& summary) {
    const Profile& p = profile(idx);
    Allocation a = m_(p);
    PropertyReport r = report_properties(a, p);
    bool hit = false;
    ViolationWitness w = base_;
    switch (kind) {
      case ViolationKind::proportionality: hit = r.proportionality_deficit > threshold; break;
      case ViolationKind::non_wastefulness: hit = r.wasted_measure > threshold; break;
      case ViolationKind::contiguity: hit = !r.contiguous; break;
      case ViolationKind::free_disposal: {
        Rational lost = desired_unallocated(a, p);
        hit = lost > threshold;
        w.parameters["desired_unallocated"] = lost;
        break;
      }
      default: break;
    }
    if (!hit) return std::nullopt;
    w.violated = kind;
    w.threshold = threshold;
    w.profile_index = idx;
    w.report = std::move(r);
    w.summary = summary;
    return w;
  }

  std::optional<ViolationWitness> gain(std::size_t truthful_idx, std::size_t agent, const Valuation& misreport,
                                       const Rational& threshold, const std::string& summary) {
    GainCertificate cert = evaluate_misreport(m_, profile(truthful_idx), agent, misreport);
    if (!(cert.gain > threshold)) return std::nullopt;
    ViolationWitness w = base_;
    w.violated = ViolationKind::strategyproofness;
    w.threshold = threshold;
    w.profile_index = truthful_idx;
    w.certificate = std::move(cert);
    w.summary = summary;
    return w;
  }

 private:
  const Mechanism& m_;
  ViolationWitness base_;
};

inline Rational override_or(const ChainParameters& params, const std::string& key, Rational fallback) {
  auto it = params.delta_overrides.find(key);
  return it == params.delta_overrides.end() ? fallback : it->second;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw infeasible_parameters(what);
}

inline std::string stage(const std::string& profile, const std::string& what) { return what + " at " + profile; }

}  // namespace detail

/// Admissible upper bound for delta in the non-wasteful chain.
inline Rational thm1_delta_bound(std::size_t n, const Rational& eps1, const Rational& eps2) {
  const Rational nn(static_cast<long>(n));
  return (Rational(1) - nn * (Rational(3) * eps1 + eps2)) / (nn * (Rational(1) - Rational(3) * eps1));
}

/// Chain against non-wasteful mechanisms: profiles (u,u,y..), (v,u,y..), (v,w,y..).
inline std::optional<ViolationWitness> thm1_chain(const Mechanism& m, const ChainParameters& params) {
  using detail::require;
  const std::size_t n = params.n;
  const Rational nn(static_cast<long>(n));
  const Rational share = Rational(1) / nn;
  require(n >= 2, "the non-wasteful chain needs n >= 2");
  require(params.eps1.sign() >= 0 && params.eps2.sign() >= 0 && params.eps1 < share && params.eps2 < share,
          "eps1 and eps2 must lie in [0, 1/n)");
  require(Rational(3) * params.eps1 + params.eps2 < share, "requires 3*eps1 + eps2 < 1/n");
  const Rational bound = thm1_delta_bound(n, params.eps1, params.eps2);
  const Rational delta = detail::override_or(params, "delta", bound / Rational(2));
  require(delta.sign() > 0 && delta < bound, "delta must lie in (0, " + bound.str() + ")");

  const Rational two_n = Rational(2) / nn;
  Valuation u = n == 2 ? Valuation::uniform() : Valuation({two_n}, {nn / Rational(2), Rational(0)});
  std::vector<Valuation> agents{u, u};
  if (n > 2) {
    Valuation y({two_n}, {Rational(0), nn / Rational(static_cast<long>(n) - 2)});
    agents.resize(n, y);
  }

  detail::ChainRun run(m, "thm1");
  run.param("delta", delta);
  run.param("delta_bound", bound);
  const std::size_t p1 = run.add(Profile(agents));
  if (auto w = run.property(p1, ViolationKind::non_wastefulness, Rational(0), "wasted cake at (u,u,y..)")) return w;
  if (auto w = run.property(p1, ViolationKind::proportionality, params.eps2, "eps2-proportionality at (u,u,y..)"))
    return w;

  Allocation a = run.run(p1);
  const std::size_t big = a.pieces[0].measure() >= a.pieces[1].measure() ? 0 : 1;
  const std::size_t small = 1 - big;
  const Piece& a_big = a.pieces[big];
  const Piece& a_small = a.pieces[small];
  run.param("len_A1", a_big.measure());
  run.param("len_A2", a_small.measure());
  if (a_small.empty()) throw std::logic_error("empty piece should have failed eps2-proportionality");

  Valuation v = uniform_on(a_big);
  const std::size_t p2 = run.add(run.profile(p1).with(big, v));
  if (auto w = run.property(p2, ViolationKind::non_wastefulness, Rational(0), "wasted cake at (v,u,y..)")) return w;
  if (auto w = run.property(p2, ViolationKind::proportionality, params.eps2, "eps2-proportionality at (v,u,y..)"))
    return w;
  if (auto w = run.gain(p2, big, u, params.eps1, "agent with the larger piece reports u at (v,u,y..)")) return w;

  Valuation wv = step_valuation({{a_big, (Rational(1) - delta) / a_big.measure()}, {a_small, delta / a_small.measure()}});
  const std::size_t p3 = run.add(run.profile(p2).with(small, wv));
  if (auto w = run.property(p3, ViolationKind::non_wastefulness, Rational(0), "wasted cake at (v,w,y..)")) return w;
  if (auto w = run.property(p3, ViolationKind::proportionality, params.eps2, "eps2-proportionality at (v,w,y..)"))
    return w;
  if (auto w = run.gain(p2, small, wv, params.eps1, "agent with the smaller piece reports w at (v,u,y..)")) return w;
  return std::nullopt;
}

/// Default deltas for the two-agent contiguous chain, given the cut c1 >= 1/2.
inline std::map<std::string, Rational> prop1_default_deltas(const Rational& c1, const Rational& eps1,
                                                            const Rational& eps2) {
  const Rational half(1, 2);
  std::map<std::string, Rational> d;
  d["delta2"] = (half - eps1 - eps2) / Rational(2);
  d["delta3"] = (c1 - eps1) / Rational(4);
  const Rational room = c1 - eps1 - d["delta3"];
  const Rational cap = min(room, half - eps2);
  d["delta1"] = cap / Rational(3);
  d["delta5"] = (d["delta1"] + room) / Rational(2);
  d["delta4"] = (d["delta1"] + min(d["delta5"], cap)) / Rational(2);
  return d;
}

/// Checks every inequality the two-agent construction relies on.
inline void prop1_check_deltas(const std::map<std::string, Rational>& d, const Rational& c1, const Rational& eps1,
                               const Rational& eps2) {
  using detail::require;
  const Rational half(1, 2);
  const auto& d1 = d.at("delta1");
  const auto& d2 = d.at("delta2");
  const auto& d3 = d.at("delta3");
  const auto& d4 = d.at("delta4");
  const auto& d5 = d.at("delta5");
  require(d2.sign() > 0 && d2 < half - eps1 - eps2, "need 0 < delta2 < 1/2 - eps1 - eps2");
  require(d3.sign() > 0 && d3 < c1 - eps1, "need 0 < delta3 < c1 - eps1");
  require(d1.sign() > 0 && d1 < min(c1 - eps1 - d3, half - eps2), "need 0 < delta1 < min(c1 - eps1 - delta3, 1/2 - eps2)");
  require(d1 < d4 && d4 < d5 && d5 < c1 - eps1 - d3, "need delta1 < delta4 < delta5 < c1 - eps1 - delta3");
  require(d4 < half - eps2, "need delta4 < 1/2 - eps2 so that w stays non-negative");
}

/// Two hungry agents, contiguous mechanisms: profiles (u,u), (v,u), (v,w).
inline std::optional<ViolationWitness> prop1_chain(const Mechanism& m, const ChainParameters& params) {
  using detail::require;
  const Rational half(1, 2);
  const Rational& e1 = params.eps1;
  const Rational& e2 = params.eps2;
  require(params.n == 2, "the two-agent contiguous chain needs n = 2");
  require(e1.sign() >= 0 && e2.sign() >= 0 && e1 < half && e2 < half && e1 + e2 < half,
          "requires 0 <= eps1, eps2 and eps1 + eps2 < 1/2");

  const Valuation u = Valuation::uniform();
  detail::ChainRun run(m, "prop1");
  const std::size_t p1 = run.add(Profile({u, u}));
  if (auto w = run.property(p1, ViolationKind::contiguity, Rational(0), "non-contiguous allocation at (u,u)")) return w;
  if (auto w = run.property(p1, ViolationKind::free_disposal, Rational(0), "hungry agents' cake left unallocated at (u,u)"))
    return w;
  if (auto w = run.property(p1, ViolationKind::proportionality, e2, "eps2-proportionality at (u,u)")) return w;

  // find the frame where agent 0 holds [0, c1] with c1 >= 1/2
  const Allocation a = run.run(p1);
  std::optional<Frame> frame;
  Rational c1;
  for (bool swap : {false, true})
    for (bool mirror : {false, true}) {
      if (frame) break;
      Frame f{swap, mirror};
      Allocation t = f.allocation(a);
      if (t.pieces[0].empty() || t.pieces[1].empty()) continue;
      const Interval& left = t.pieces[0].intervals().front();
      if (left.lo == Rational(0) && left.hi >= half && t.pieces[1].intervals().front().lo == left.hi) {
        frame = f;
        c1 = left.hi;
      }
    }
  if (!frame) throw std::logic_error("contiguous proportional two-agent allocation without a single cut");
  run.param("c1", c1);
  run.param("swap", Rational(frame->swap ? 1 : 0));
  run.param("mirror", Rational(frame->mirror ? 1 : 0));

  std::map<std::string, Rational> d = prop1_default_deltas(c1, e1, e2);
  for (auto& [key, value] : d) value = detail::override_or(params, key, value);
  prop1_check_deltas(d, c1, e1, e2);
  for (const auto& [key, value] : d) run.param(key, value);

  const Valuation v = Valuation::from_masses({d["delta1"], c1 - d["delta3"], c1},
                                             {half + e2, half - e1 - e2 - d["delta2"], e1, d["delta2"]});
  const Valuation wv = Valuation::from_masses({d["delta4"], d["delta5"], c1 - d["delta3"]},
                                              {half - e2, Rational(2) * e2, d["delta4"], half - e2 - d["delta4"]});
  const std::size_t a1 = frame->agent(0);
  const std::size_t a2 = frame->agent(1);

  const std::size_t p2 = run.add(frame->profile(Profile({v, u})));
  if (auto w = run.property(p2, ViolationKind::contiguity, Rational(0), "non-contiguous allocation at (v,u)")) return w;
  if (auto w = run.property(p2, ViolationKind::free_disposal, Rational(0), "hungry agents' cake left unallocated at (v,u)"))
    return w;
  if (auto w = run.property(p2, ViolationKind::proportionality, e2, "eps2-proportionality at (v,u)")) return w;
  if (auto w = run.gain(p2, a1, frame->valuation(u), e1, "agent 1 reports u at (v,u)")) return w;

  const std::size_t p3 = run.add(frame->profile(Profile({v, wv})));
  if (auto w = run.property(p3, ViolationKind::contiguity, Rational(0), "non-contiguous allocation at (v,w)")) return w;
  if (auto w = run.property(p3, ViolationKind::free_disposal, Rational(0), "hungry agents' cake left unallocated at (v,w)"))
    return w;
  if (auto w = run.property(p3, ViolationKind::proportionality, e2, "eps2-proportionality at (v,w)")) return w;
  if (auto w = run.gain(p2, a2, frame->valuation(wv), e1, "agent 2 reports w at (v,u)")) return w;
  return std::nullopt;
}

/// Agent type of the contiguous chain: density n/(1 - n eps) on
/// [(1/n - eps)^2, (1/n - eps)^2 + 1/n - eps].
inline Valuation thm2_r(std::size_t n, const Rational& eps) {
  const Rational nn(static_cast<long>(n));
  const Rational slack = Rational(1) / nn - eps;
  const Rational start = slack * slack;
  return Valuation({start, start + slack}, {Rational(0), nn / (Rational(1) - nn * eps), Rational(0)});
}

inline Rational thm2_b(std::size_t n, const Rational& eps, const Rational& c1, const Rational& c2) {
  const Rational slack = Rational(1) / Rational(static_cast<long>(n)) - eps;
  return max(c2 - slack * (c2 - c1), slack * slack + slack);
}

/// Contiguous mechanisms with n >= 3: profiles (u,u,r..), (v,u,r..), (v,w,r..).
/// Proportionality slack is eps2; a gain must exceed eps1 to count.
inline std::optional<ViolationWitness> thm2_chain(const Mechanism& m, const ChainParameters& params) {
  using detail::require;
  const std::size_t n = params.n;
  require(n >= 3, "the contiguous chain needs n >= 3");
  const Rational nn(static_cast<long>(n));
  const Rational slack = Rational(1) / nn - params.eps2;  // 1/n - eps
  require(params.eps2.sign() >= 0 && slack.sign() > 0, "requires 0 <= eps < 1/n");
  require(params.eps1.sign() >= 0, "eps1 must be non-negative");
  const Rational delta = detail::override_or(params, "delta", slack / Rational(2));
  require(delta.sign() > 0 && delta < slack, "delta must lie in (0, 1/n - eps)");

  const Valuation u = Valuation::uniform();
  const Valuation r = thm2_r(n, params.eps2);
  std::vector<Valuation> agents(n, r);
  agents[0] = u;
  agents[1] = u;

  detail::ChainRun run(m, "thm2");
  run.param("delta", delta);
  const std::size_t p1 = run.add(Profile(agents));
  auto basic = [&](std::size_t idx, const std::string& name) -> std::optional<ViolationWitness> {
    if (auto w = run.property(idx, ViolationKind::contiguity, Rational(0), "non-contiguous allocation at " + name))
      return w;
    if (auto w = run.property(idx, ViolationKind::free_disposal, Rational(0), "desired cake left unallocated at " + name))
      return w;
    return run.property(idx, ViolationKind::proportionality, params.eps2, "eps-proportionality at " + name);
  };
  if (auto w = basic(p1, "(u,u,r..)")) return w;

  const Allocation a = run.run(p1);
  auto holder = a.right_end_holder();
  if (!holder || *holder > 1) return std::nullopt;  // cannot happen for an eps-proportional contiguous outcome
  const Frame frame{*holder == 0, false};
  const std::size_t a1 = frame.agent(0);
  const std::size_t a2 = frame.agent(1);
  const Piece& piece1 = a.pieces[a1];
  if (piece1.empty()) return std::nullopt;
  const Rational c1 = piece1.intervals().front().lo;
  const Rational c2 = piece1.intervals().back().hi;
  run.param("c1", c1);
  run.param("c2", c2);
  run.param("swap", Rational(frame.swap ? 1 : 0));

  const Valuation v = uniform_on(piece1);
  const std::size_t p2 = run.add(run.profile(p1).with(a1, v));
  if (auto w = basic(p2, "(v,u,r..)")) return w;
  if (auto w = run.gain(p2, a1, u, params.eps1, "agent 1 reports u at (v,u,r..)")) return w;
  if (auto w = run.gain(p1, a1, v, params.eps1, "agent 1 reports v at (u,u,r..)")) return w;

  const Rational b = thm2_b(n, params.eps2, c1, c2);
  run.param("b", b);
  if (!(b < c2) || !(c2 < Rational(1))) return std::nullopt;
  const Valuation wv = Valuation::from_masses({b, c2}, {Rational(0), Rational(1) - slack + delta, slack - delta});
  const std::size_t p3 = run.add(run.profile(p2).with(a2, wv));
  if (auto w = basic(p3, "(v,w,r..)")) return w;
  if (auto w = run.gain(p2, a2, wv, params.eps1, "agent 2 reports w at (v,u,r..)")) return w;
  return std::nullopt;
}

/// The two-agent zero-piece-exchange example.
struct DiscussionExample {
  Profile truthful;  // (v1, v2)
  Profile deviated;  // (v1, v2')
  ViolationWitness expected;
};

inline DiscussionExample discussion_example() {
  const Rational half(1, 2), four_fifths(4, 5);
  Valuation v1({half}, {Rational(0), Rational(2)});
  Valuation v2({half, four_fifths}, {Rational(1), Rational(0), Rational(5, 2)});
  Valuation v2_prime({half, four_fifths}, {Rational(2, 5), Rational(1), Rational(5, 2)});
  Profile truthful({v1, v2});
  Profile deviated({v1, v2_prime});

  ViolationWitness w;
  w.chain = "discussion";
  w.mechanism = "modified-ep-exchange";
  w.profiles = {truthful, deviated};
  w.violated = ViolationKind::strategyproofness;
  w.threshold = modified_even_paz_gain_bound(2);
  w.profile_index = 0;
  w.certificate = GainCertificate{1, half, v2_prime, Rational(1), half};
  w.summary = "agent 2 reports v2' and collects agent 1's zero piece in the exchange";
  return {std::move(truthful), std::move(deviated), std::move(w)};
}

/// Runs the example against `m`; the finding must exceed the modified
/// Even-Paz guarantee for two agents.
inline std::optional<ViolationWitness> discussion_chain(const Mechanism& m) {
  DiscussionExample ex = discussion_example();
  detail::ChainRun run(m, "discussion");
  const std::size_t p = run.add(ex.truthful);
  run.add(ex.deviated);
  return run.gain(p, 1, ex.deviated[1], modified_even_paz_gain_bound(2), ex.expected.summary);
}

struct WorstCaseFixture {
  Profile profile;
  std::size_t agent = 0;
  Valuation misreport;
  Rational expected_gain_lower_bound;
};

/// Even-Paz instance where agent 0 gains close to 1 - 1/n by moving its cut.
/// Agent 0 puts 1/n on [0, gap/4], almost everything else on [gap/4, 1/n] and
/// gap/2 on the rest; everybody else is uniform.
inline WorstCaseFixture ep_worstcase_fixture(std::size_t n, const Rational& gap) {
  if (n != 2 && n != 3) throw infeasible_parameters("the worst-case fixture is defined for n in {2, 3}");
  const Rational nn(static_cast<long>(n));
  const Rational share = Rational(1) / nn;
  if (!(gap.sign() > 0 && gap < Rational(1) / (Rational(2) * nn)))
    throw infeasible_parameters("gap must lie in (0, 1/(2n))");
  const Rational quarter = gap / Rational(4);
  Valuation manipulator = Valuation::from_masses(
      {quarter, share}, {share, Rational(1) - share - gap / Rational(2), gap / Rational(2)});
  std::vector<Valuation> agents(n, Valuation::uniform());
  agents[0] = manipulator;
  const Rational median = share - quarter;
  Valuation misreport = Valuation::from_masses({median}, {share, Rational(1) - share});
  return {Profile(std::move(agents)), 0, std::move(misreport), (Rational(1) - share) - gap};
}

}  // namespace cake
