#pragma once

// Simulated Robertson-Webb oracle: eval and cut queries answered exactly
// against a hidden valuation, with query accounting. Repeated identical
// queries are served from a cache and counted once.

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cake/valuation.hpp"

namespace cake {

enum class QueryKind { eval, cut };

struct QueryRecord {
  QueryKind kind;
  Rational first;   // eval: x, cut: x
  Rational second;  // eval: y, cut: r
  Rational answer;
};

class RWOracle {
 public:
  explicit RWOracle(Valuation hidden) : hidden_(std::move(hidden)) {}
  virtual ~RWOracle() = default;
  RWOracle(const RWOracle&) = default;
  RWOracle& operator=(const RWOracle&) = default;

  /// V([x, y]).
  Rational eval(const Rational& x, const Rational& y) {
    if (x < Rational(0) || y > Rational(1) || y < x)
      throw std::out_of_range("eval on [" + x.str() + ", " + y.str() + "] outside the cake");
    return ask(QueryKind::eval, x, y, [&] { return hidden_.value(x, y); });
  }

  /// Leftmost y with V([x, y]) = r. Throws std::domain_error when infeasible.
  Rational cut(const Rational& x, const Rational& r) {
    if (x < Rational(0) || x > Rational(1)) throw std::out_of_range("cut from " + x.str() + " outside the cake");
    return ask(QueryKind::cut, x, r, [&] { return hidden_.cut(x, r); });
  }

  [[nodiscard]] std::size_t query_count() const { return log_.size(); }
  [[nodiscard]] const std::vector<QueryRecord>& log() const { return log_; }

  /// The function queries are answered from (the report, for a strategic agent).
  [[nodiscard]] const Valuation& answering() const { return hidden_; }

 private:
  template <typename F>
  Rational ask(QueryKind kind, const Rational& a, const Rational& b, F&& compute) {
    auto key = std::make_tuple(kind, a, b);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Rational answer = compute();
    cache_.emplace(key, answer);
    log_.push_back({kind, a, b, answer});
    return answer;
  }

  Valuation hidden_;
  std::vector<QueryRecord> log_;
  std::map<std::tuple<QueryKind, Rational, Rational>, Rational> cache_;
};

/// An agent that answers every query according to a fixed misreport.
class StrategicOracle : public RWOracle {
 public:
  StrategicOracle(Valuation reported, Valuation true_valuation)
      : RWOracle(std::move(reported)), true_valuation_(std::move(true_valuation)) {}

  [[nodiscard]] const Valuation& reported() const { return answering(); }
  [[nodiscard]] const Valuation& true_valuation() const { return true_valuation_; }

 private:
  Valuation true_valuation_;
};

}  // namespace cake
