#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/piece.hpp"
#include "cake/valuation.hpp"

namespace cake {

struct Allocation {
  std::vector<Piece> pieces;  // one per agent
  Piece discarded;

  [[nodiscard]] std::size_t size() const { return pieces.size(); }

  [[nodiscard]] bool contiguous() const {
    return std::all_of(pieces.begin(), pieces.end(), [](const Piece& p) { return p.contiguous(); });
  }

  [[nodiscard]] Allocation mirrored() const {
    Allocation out;
    for (const auto& p : pieces) out.pieces.push_back(p.mirrored());
    out.discarded = discarded.mirrored();
    return out;
  }

  /// Index of the agent whose piece reaches the point 1, if any.
  [[nodiscard]] std::optional<std::size_t> right_end_holder() const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (!pieces[i].empty() && pieces[i].intervals().back().hi == Rational(1)) return i;
    return std::nullopt;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Exact values V_i(A_i) for every agent.
inline std::vector<Rational> agent_values(const Allocation& a, const Profile& p) {
  std::vector<Rational> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(p[i].value_of(a.pieces[i]));
  return out;
}

struct AllocationViolation {
  enum class Kind { overlap, gap, free_disposal };
  Kind kind;
  std::vector<std::size_t> agents;  // agents involved (overlap pair, or the agent desiring discarded cake)
  Piece where;

  [[nodiscard]] std::string describe() const {
    switch (kind) {
      case Kind::overlap:
        return "agents " + std::to_string(agents.at(0)) + " and " + std::to_string(agents.at(1)) + " overlap on " +
               where.str();
      case Kind::gap:
        return "cake " + where.str() + " is neither allocated nor discarded";
      case Kind::free_disposal:
        return "discarded cake " + where.str() + " is desired by agent " + std::to_string(agents.at(0));
    }
    return {};
  }
};

/// Checks disjointness, coverage, and that only undesired cake is discarded.
inline std::vector<AllocationViolation> validate_allocation(const Allocation& a, const Profile& p) {
  if (a.size() != p.size())
    throw std::invalid_argument("allocation has " + std::to_string(a.size()) + " pieces for " +
                                std::to_string(p.size()) + " agents");
  using Kind = AllocationViolation::Kind;
  std::vector<AllocationViolation> out;
  std::vector<const Piece*> parts;
  for (const auto& piece : a.pieces) parts.push_back(&piece);
  parts.push_back(&a.discarded);

  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      Piece common = piece_intersect(*parts[i], *parts[j]);
      if (!common.empty()) out.push_back({Kind::overlap, {i, j}, common});
    }

  Piece covered;
  for (const Piece* part : parts) covered = piece_union(covered, *part);
  if (Piece rest = piece_subtract(Piece::whole(), covered); !rest.empty()) out.push_back({Kind::gap, {}, rest});

  for (std::size_t i = 0; i < p.size(); ++i)
    if (Piece desired = piece_intersect(a.discarded, p[i].positive_piece()); !desired.empty())
      out.push_back({Kind::free_disposal, {i}, desired});
  return out;
}

}  // namespace cake
