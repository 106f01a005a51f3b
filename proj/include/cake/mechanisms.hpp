#pragma once

// Deterministic direct-revelation mechanisms.
//
// Even-Paz and its modified variant share one recursive driver. At a node
// [a,b] with k agents every agent reports the leftmost point c_i with
// V_i(a, c_i) = floor(k/2)/k * V_i(a, b); reports are ordered by (c_i, agent
// index) and the first floor(k/2) agents form the left group, so the group
// sizes are fixed even when reports tie.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/allocation.hpp"
#include "cake/oracle.hpp"
#include "cake/valuation.hpp"

namespace cake {

enum class MechanismProperty { contiguous, proportional, non_wasteful, hungry_only };
enum class MechanismKind { direct_revelation, query_driven };
enum class EpVariant { even_paz, modified_even_paz };

class unknown_mechanism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Mechanism {
  std::string name;
  MechanismKind kind = MechanismKind::direct_revelation;
  std::function<Allocation(const Profile&)> run;
  std::set<MechanismProperty> declared;
  std::optional<EpVariant> ep_variant;  // set for the two EP-family mechanisms

  Allocation operator()(const Profile& p) const { return run(p); }
  [[nodiscard]] bool declares(MechanismProperty prop) const { return declared.contains(prop); }
};

/// One recursion node of an EP-family run.
struct EpNode {
  Rational a, b;
  std::vector<std::size_t> agents;  // in report order: sorted by (cut, index)
  std::vector<Rational> cuts;       // parallel to `agents`
  std::size_t left_size = 0;        // floor(k/2)
  bool inner = false;               // part of the middle-piece split of the modified variant
};

/// Reporter(agent, a, b, k) returns the agent's cut at node [a,b] with k agents.
using CutReporter = std::function<Rational(std::size_t, const Rational&, const Rational&, std::size_t)>;

/// Fraction floor(k/2)/k asked for at a node with k agents.
inline Rational ep_fraction(std::size_t k) {
  return Rational(static_cast<long>(k / 2), static_cast<long>(k));
}

inline CutReporter truthful_reporter(const Profile& p) {
  return [&p](std::size_t i, const Rational& a, const Rational& b, std::size_t k) {
    const Valuation& v = p[i];
    return v.cut(a, ep_fraction(k) * v.value(a, b));
  };
}

namespace detail {

class EpDriver {
 public:
  EpDriver(std::size_t n, CutReporter reporter, std::vector<EpNode>* trace)
      : pieces_(n), reporter_(std::move(reporter)), trace_(trace) {}

  void even_paz(const Rational& a, const Rational& b, std::vector<std::size_t> agents, bool inner) {
    if (agents.empty()) throw std::logic_error("Even-Paz node without agents");
    if (agents.size() == 1) {
      give(agents.front(), a, b);
      return;
    }
    EpNode node = split(a, b, std::move(agents), inner);
    const std::size_t h = node.left_size;
    Rational d = node.cuts[h - 1];
    std::vector<std::size_t> left(node.agents.begin(), node.agents.begin() + static_cast<long>(h));
    std::vector<std::size_t> right(node.agents.begin() + static_cast<long>(h), node.agents.end());
    record(std::move(node));
    even_paz(a, d, std::move(left), inner);
    even_paz(d, b, std::move(right), inner);
  }

  void modified(const Rational& a, const Rational& b, std::vector<std::size_t> agents) {
    if (agents.empty()) throw std::logic_error("modified Even-Paz node without agents");
    if (agents.size() == 1) {
      give(agents.front(), a, b);
      return;
    }
    std::vector<std::size_t> everyone = agents;
    std::sort(everyone.begin(), everyone.end());
    EpNode node = split(a, b, std::move(agents), false);
    const std::size_t h = node.left_size;
    Rational d_left = node.cuts[h - 1];
    Rational d_right = node.cuts[h];
    std::vector<std::size_t> left(node.agents.begin(), node.agents.begin() + static_cast<long>(h));
    std::vector<std::size_t> right(node.agents.begin() + static_cast<long>(h), node.agents.end());
    record(std::move(node));
    if (d_left < d_right) even_paz(d_left, d_right, std::move(everyone), true);
    modified(a, d_left, std::move(left));
    modified(d_right, b, std::move(right));
  }

  Allocation finish() {
    Allocation out;
    for (auto& ivs : pieces_) out.pieces.emplace_back(std::move(ivs));
    return out;
  }

 private:
  EpNode split(const Rational& a, const Rational& b, std::vector<std::size_t> agents, bool inner) {
    const std::size_t k = agents.size();
    std::vector<std::pair<Rational, std::size_t>> reports;
    reports.reserve(k);
    for (std::size_t i : agents) {
      Rational c = reporter_(i, a, b, k);
      if (c < a || c > b)
        throw std::logic_error("cut report " + c.str() + " outside node [" + a.str() + ", " + b.str() + "]");
      reports.emplace_back(std::move(c), i);
    }
    std::sort(reports.begin(), reports.end());
    EpNode node{a, b, {}, {}, k / 2, inner};
    for (auto& [c, i] : reports) {
      node.agents.push_back(i);
      node.cuts.push_back(std::move(c));
    }
    return node;
  }

  void give(std::size_t agent, const Rational& a, const Rational& b) {
    if (a < b) pieces_.at(agent).emplace_back(a, b);
  }

  void record(EpNode node) {
    if (trace_ != nullptr) trace_->push_back(std::move(node));
  }

  std::vector<std::vector<Interval>> pieces_;
  CutReporter reporter_;
  std::vector<EpNode>* trace_;
};

inline std::vector<std::size_t> all_agents(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace detail

/// Runs an EP-family mechanism for n agents against arbitrary cut reports.
inline Allocation run_ep_family(std::size_t n, EpVariant variant, const CutReporter& reporter,
                                std::vector<EpNode>* trace = nullptr) {
  detail::EpDriver driver(n, reporter, trace);
  if (variant == EpVariant::even_paz)
    driver.even_paz(Rational(0), Rational(1), detail::all_agents(n), false);
  else
    driver.modified(Rational(0), Rational(1), detail::all_agents(n));
  return driver.finish();
}

inline Allocation even_paz(const Profile& p, std::vector<EpNode>* trace = nullptr) {
  return run_ep_family(p.size(), EpVariant::even_paz, truthful_reporter(p), trace);
}

inline Allocation modified_even_paz(const Profile& p, std::vector<EpNode>* trace = nullptr) {
  return run_ep_family(p.size(), EpVariant::modified_even_paz, truthful_reporter(p), trace);
}

/// Even-Paz in the query model: every report is one cut query plus one eval query.
inline Allocation even_paz_queries(std::span<RWOracle* const> oracles, EpVariant variant = EpVariant::even_paz) {
  CutReporter reporter = [&](std::size_t i, const Rational& a, const Rational& b, std::size_t k) {
    return oracles[i]->cut(a, ep_fraction(k) * oracles[i]->eval(a, b));
  };
  return run_ep_family(oracles.size(), variant, reporter);
}

/// Each cell of the joint breakpoint grid is split by length, left to right in
/// agent order, among the agents with positive density there; cells nobody
/// desires are discarded.
inline Allocation equal_split_nonwasteful(const Profile& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<Interval>> pieces(n);
  std::vector<Interval> discarded;
  auto grid = p.grid();
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const Rational& lo = grid[c];
    const Rational& hi = grid[c + 1];
    std::vector<std::size_t> desiring;
    for (std::size_t i = 0; i < n; ++i)
      if (p[i].density_on(lo, hi).sign() > 0) desiring.push_back(i);
    if (desiring.empty()) {
      discarded.emplace_back(lo, hi);
      continue;
    }
    Rational share = (hi - lo) / Rational(static_cast<long>(desiring.size()));
    for (std::size_t t = 0; t < desiring.size(); ++t) {
      Rational from = lo + share * Rational(static_cast<long>(t));
      Rational to = t + 1 == desiring.size() ? hi : from + share;
      pieces[desiring[t]].emplace_back(from, to);
    }
  }
  Allocation out;
  for (auto& ivs : pieces) out.pieces.emplace_back(std::move(ivs));
  out.discarded = Piece(std::move(discarded));
  return out;
}

/// Post-processing pass: every part of an agent's piece where its reported
/// density is 0 goes to the lowest-index agent with positive reported density
/// there. Parts nobody desires stay where they are.
inline Allocation exchange_zero_pieces(const Allocation& base, const Profile& p) {
  const std::size_t n = p.size();
  const auto grid = p.grid();
  std::vector<Piece> give(n), take(n);
  for (std::size_t i = 0; i < n; ++i) {
    Piece zero = piece_intersect(base.pieces[i], p[i].zero_piece());
    for (const auto& iv : zero.intervals()) {
      // refine by the joint grid so each cell has one density per agent
      std::vector<Rational> cuts{iv.lo};
      for (const auto& g : grid)
        if (iv.lo < g && g < iv.hi) cuts.push_back(g);
      cuts.push_back(iv.hi);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || p[j].density_on(cuts[c], cuts[c + 1]).sign() <= 0) continue;
          Piece cell(cuts[c], cuts[c + 1]);
          give[i] = piece_union(give[i], cell);
          take[j] = piece_union(take[j], cell);
          break;
        }
      }
    }
  }
  Allocation out;
  for (std::size_t i = 0; i < n; ++i)
    out.pieces.push_back(piece_union(piece_subtract(base.pieces[i], give[i]), take[i]));
  out.discarded = base.discarded;
  return out;
}

inline Mechanism make_even_paz() {
  return {"even-paz", MechanismKind::direct_revelation, [](const Profile& p) { return even_paz(p); },
          {MechanismProperty::contiguous, MechanismProperty::proportional}, EpVariant::even_paz};
}

inline Mechanism make_modified_even_paz() {
  return {"modified-ep", MechanismKind::direct_revelation, [](const Profile& p) { return modified_even_paz(p); },
          {MechanismProperty::proportional}, EpVariant::modified_even_paz};
}

inline Mechanism make_equal_split() {
  return {"equal-split", MechanismKind::direct_revelation, [](const Profile& p) { return equal_split_nonwasteful(p); },
          {MechanismProperty::non_wasteful}, std::nullopt};
}

inline Mechanism with_zero_piece_exchange(const Mechanism& inner, std::string name = {}) {
  if (inner.kind != MechanismKind::direct_revelation)
    throw std::invalid_argument("zero-piece exchange wraps direct-revelation mechanisms only");
  if (name.empty()) name = inner.name + "-exchange";
  std::set<MechanismProperty> declared;
  if (inner.declares(MechanismProperty::proportional)) declared.insert(MechanismProperty::proportional);
  auto run = inner.run;
  return {std::move(name), MechanismKind::direct_revelation,
          [run](const Profile& p) { return exchange_zero_pieces(run(p), p); }, std::move(declared), std::nullopt};
}

inline std::vector<std::string> mechanism_names() {
  return {"even-paz", "modified-ep", "equal-split", "ep-exchange", "modified-ep-exchange"};
}

inline Mechanism make_mechanism(const std::string& name) {
  if (name == "even-paz") return make_even_paz();
  if (name == "modified-ep") return make_modified_even_paz();
  if (name == "equal-split") return make_equal_split();
  if (name == "ep-exchange") return with_zero_piece_exchange(make_even_paz(), "ep-exchange");
  if (name == "modified-ep-exchange")
    return with_zero_piece_exchange(make_modified_even_paz(), "modified-ep-exchange");
  throw unknown_mechanism("unknown mechanism \"" + name + "\"");
}

}  // namespace cake
