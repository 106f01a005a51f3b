#pragma once

// Best response for one manipulator in the Even-Paz family.
//
// In these mechanisms a report only matters through the cut point it induces
// at each node the manipulator takes part in. The search fixes the other
// agents' truthful cuts, lets the manipulator pick a cut from a candidate set
// at every node (other agents' cuts, its own breakpoints, midpoints, and points
// a tiny distance beside each other cut, where suprema are approached), and
// maximizes its true value over the recursion tree. Positions
// that leave the manipulator in the same group without setting a group
// boundary lead to identical outcomes and are evaluated once.
//
// The chosen plan is then turned into a concrete normalized misreport: every
// node interval gets a positive mass distribution built bottom-up so that the
// manipulator's cut lands exactly on the planned point. The certificate is
// produced by re-running the mechanism on that misreport.
//
// The grid engine's misreport family is searched too and the better of the
// two certificates is returned, so this engine dominates the grid search.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cake/mechanisms.hpp"
#include "cake/properties.hpp"

namespace cake {

class not_ep_family : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EpBestResponse {
  GainCertificate certificate;
  Rational planned_value;  // true value of the best cut-position plan
};

namespace detail {

struct PlanNode {
  enum class Role { leaf, empty, left, right };
  Rational a, b;
  std::size_t k = 1;
  Role role = Role::leaf;
  bool pivot = false;
  Rational cut;           // planned manipulator cut (pivot), or unused
  Rational d_left, d_right;  // node boundaries after the split (d_right == d_left for Even-Paz)
  bool has_middle = false;
  std::shared_ptr<const PlanNode> child;
  std::shared_ptr<const PlanNode> middle;
  Rational value;
};

using PlanPtr = std::shared_ptr<const PlanNode>;

struct Cell {
  Rational lo, hi, mass;
};

class EpPlanner {
 public:
  EpPlanner(const Profile& p, std::size_t manipulator, EpVariant variant, const SearchConfig& cfg)
      : p_(p), m_(manipulator), variant_(variant), cfg_(cfg) {}

  PlanPtr solve_root() {
    std::vector<std::size_t> all(p_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return solve(variant_ == EpVariant::modified_even_paz, Rational(0), Rational(1), all);
  }

 private:
  using Key = std::tuple<bool, Rational, Rational, std::vector<std::size_t>>;

  PlanPtr solve(bool modified, const Rational& a, const Rational& b, const std::vector<std::size_t>& agents) {
    Key key{modified, a, b, agents};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    PlanPtr out = compute(modified, a, b, agents);
    memo_.emplace(std::move(key), out);
    return out;
  }

  PlanPtr compute(bool modified, const Rational& a, const Rational& b, const std::vector<std::size_t>& agents) {
    const std::size_t k = agents.size();
    auto node = std::make_shared<PlanNode>();
    node->a = a;
    node->b = b;
    node->k = k;
    if (!(a < b)) {
      node->role = PlanNode::Role::empty;
      return node;
    }
    if (k == 1) {
      node->role = PlanNode::Role::leaf;
      node->value = p_[m_].value(a, b);
      return node;
    }

    const Rational frac = ep_fraction(k);
    std::vector<std::pair<Rational, std::size_t>> others;
    for (std::size_t i : agents)
      if (i != m_) others.emplace_back(p_[i].cut(a, frac * p_[i].value(a, b)), i);

    const Valuation& truth = p_[m_];
    std::vector<Rational> base{a, b, truth.cut(a, frac * truth.value(a, b))};
    for (const auto& [c, i] : others) base.push_back(c);
    for (const auto& x : truth.bounds())
      if (a < x && x < b) base.push_back(x);
    base = sorted_unique(std::move(base));
    // positions just beside the other agents' cuts stand in for suprema that are only approached
    Rational tiny = smallest_gap(base) / Rational(cfg_.offset_divisor);
    for (int r = 0; r < cfg_.limit_exponent; ++r) tiny /= Rational(2);
    std::vector<Rational> candidates = base;
    for (std::size_t j = 0; j + 1 < base.size(); ++j) candidates.push_back((base[j] + base[j + 1]) / Rational(2));
    for (const auto& [c, i] : others) {
      candidates.push_back(c - tiny);
      candidates.push_back(c + tiny);
    }
    candidates.push_back(a + tiny);
    candidates.push_back(b - tiny);
    std::erase_if(candidates, [&](const Rational& x) { return !(a < x && x < b); });
    candidates = sorted_unique(std::move(candidates));

    const std::size_t h = k / 2;
    std::shared_ptr<PlanNode> best;
    bool seen_free_left = false, seen_free_right = false;
    for (const auto& c : candidates) {
      std::vector<std::pair<Rational, std::size_t>> reports = others;
      reports.emplace_back(c, m_);
      std::sort(reports.begin(), reports.end());
      std::size_t rank = 0;
      while (reports[rank].second != m_) ++rank;

      auto plan = std::make_shared<PlanNode>(*node);
      plan->d_left = reports[h - 1].first;
      plan->d_right = modified ? reports[h].first : plan->d_left;
      std::vector<std::size_t> left, right;
      for (std::size_t r = 0; r < k; ++r) (r < h ? left : right).push_back(reports[r].second);
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());

      if (rank < h) {
        plan->role = PlanNode::Role::left;
        plan->pivot = rank == h - 1;
        if (!plan->pivot) {
          if (seen_free_left) continue;
          seen_free_left = true;
        }
        plan->child = solve(modified, a, plan->d_left, left);
      } else {
        plan->role = PlanNode::Role::right;
        plan->pivot = modified && rank == h;
        if (!plan->pivot) {
          if (seen_free_right) continue;
          seen_free_right = true;
        }
        plan->child = solve(modified, plan->d_right, b, right);
      }
      plan->cut = c;
      plan->value = plan->child->value;
      if (modified && plan->d_left < plan->d_right) {
        plan->has_middle = true;
        plan->middle = solve(false, plan->d_left, plan->d_right, agents);
        plan->value += plan->middle->value;
      }
      if (!best || plan->value > best->value) best = plan;
    }
    if (!best) throw std::logic_error("no feasible manipulator position at node [" + a.str() + ", " + b.str() + "]");
    return best;
  }

  const Profile& p_;
  std::size_t m_;
  EpVariant variant_;
  SearchConfig cfg_;
  std::map<Key, PlanPtr> memo_;
};

inline Rational total_mass(const std::vector<Cell>& cells) {
  Rational t;
  for (const auto& c : cells) t += c.mass;
  return t;
}

inline void scale(std::vector<Cell>& cells, const Rational& factor) {
  for (auto& c : cells) c.mass *= factor;
}

/// Adds total mass `mass` spread with one density over the given intervals.
inline void spread(std::vector<Cell>& out, const std::vector<Interval>& region, const Rational& mass) {
  Rational len;
  for (const auto& iv : region) len += iv.length();
  for (const auto& iv : region) out.push_back({iv.lo, iv.hi, mass * iv.length() / len});
}

inline std::vector<Interval> nonempty(std::initializer_list<std::pair<Rational, Rational>> ivs) {
  std::vector<Interval> out;
  for (const auto& [lo, hi] : ivs)
    if (lo < hi) out.emplace_back(lo, hi);
  return out;
}

/// Positive mass distribution on [node.a, node.b] that makes the manipulator
/// follow the plan.
inline std::vector<Cell> realize(const PlanNode& node) {
  using Role = PlanNode::Role;
  if (node.role == Role::empty) return {};
  if (node.role == Role::leaf) return {{node.a, node.b, Rational(1)}};

  const Rational q = ep_fraction(node.k);
  std::vector<Cell> child = realize(*node.child);
  scale(child, Rational(1) / total_mass(child));
  std::vector<Cell> middle;
  if (node.has_middle) {
    middle = realize(*node.middle);
    scale(middle, Rational(1) / total_mass(middle));
  }

  std::vector<Cell> out = child;
  if (node.role == Role::left) {
    // child on [a, d_left]; middle and the right group's cake lie right of the cut
    std::vector<Interval> free = nonempty({{node.d_right, node.b}});
    if (!node.has_middle) free = nonempty({{node.d_left, node.b}});
    const bool others = node.has_middle || !free.empty();
    Rational f = node.pivot ? Rational(1) : (others ? (Rational(1) + q) / Rational(2) : q);
    Rational rest = f / q - Rational(1);  // mass right of the child block
    if (node.has_middle && !free.empty()) {
      scale(middle, rest / Rational(2));
      spread(out, free, rest / Rational(2));
    } else if (node.has_middle) {
      scale(middle, rest);
    } else if (!free.empty()) {
      spread(out, free, rest);
    }
  } else {
    // child on [d_right, b]; the left group's cake and the middle lie left of the cut
    std::vector<Interval> free = nonempty({{node.a, node.d_left}});
    const bool others = node.has_middle || !free.empty();
    Rational f = node.pivot ? Rational(0) : (others ? q / Rational(2) : q);
    Rational before = (q - f) / (Rational(1) - q);  // mass left of the child block
    if (node.has_middle && !free.empty()) {
      scale(middle, before / Rational(2));
      spread(out, free, before / Rational(2));
    } else if (node.has_middle) {
      scale(middle, before);
    } else if (!free.empty()) {
      spread(out, free, before);
    }
  }
  out.insert(out.end(), middle.begin(), middle.end());
  std::sort(out.begin(), out.end(), [](const Cell& x, const Cell& y) { return x.lo < y.lo; });
  return out;
}

inline Valuation to_valuation(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.lo < y.lo; });
  Rational total = total_mass(cells);
  std::vector<Rational> bps, densities;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j > 0) bps.push_back(cells[j].lo);
    densities.push_back(cells[j].mass / total / (cells[j].hi - cells[j].lo));
  }
  return {bps, std::move(densities)};
}

}  // namespace detail

/// Best response of `agent` in an EP-family mechanism; see the file comment.
/// A grid result already computed with the same config can be passed in to
/// skip the second search.
inline EpBestResponse ep_cutpoint_best_response(const Mechanism& m, const Profile& p, std::size_t agent,
                                                const SearchConfig& cfg = {},
                                                const GainCertificate* grid_result = nullptr) {
  if (!m.ep_variant) throw not_ep_family("mechanism \"" + m.name + "\" is not in the Even-Paz family");
  if (agent >= p.size()) throw std::out_of_range("agent index out of range");
  detail::EpPlanner planner(p, agent, *m.ep_variant, cfg);
  detail::PlanPtr plan = planner.solve_root();
  Valuation report = detail::to_valuation(detail::realize(*plan));
  GainCertificate cert = evaluate_misreport(m, p, agent, report);
  // the grid family is searched as well, so this engine never reports less than best_response_gain
  GainCertificate grid =
      grid_result != nullptr && grid_result->agent == agent ? *grid_result : best_response_gain(m, p, agent, cfg);
  if (grid.gain > cert.gain) cert = std::move(grid);
  if (cert.gain.sign() < 0) cert = {agent, cert.truthful_value, p[agent], cert.truthful_value, Rational(0)};
  return {std::move(cert), plan->value};
}

}  // namespace cake
