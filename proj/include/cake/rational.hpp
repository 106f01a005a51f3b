#pragma once

// Exact rational numbers backed by GMP.
//
// Values are always in lowest terms with a positive denominator. Text form is
// "p/q" (or "p" when q == 1); parsing additionally accepts finite decimal
// strings such as "0.8", which are converted exactly (0.8 -> 4/5).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cake {

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : q_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "p/q", an integer, or a finite decimal. Throws parse_error.
  static Rational parse(std::string_view text);

  [[nodiscard]] const mpq_class& raw() const { return q_; }
  [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }

  [[nodiscard]] int sign() const { return sgn(q_); }
  [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
  [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }
  [[nodiscard]] std::string str() const { return q_.get_str(); }
  [[nodiscard]] double to_double() const { return q_.get_d(); }

  /// floor as a signed 64-bit integer; throws if it does not fit.
  [[nodiscard]] std::int64_t floor_int() const {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("floor does not fit in int64");
    return f.get_si();
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw parse_error("malformed rational \"" + std::string(whole) + "\"");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw parse_error("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = detail::parse_integer(text.substr(0, slash), whole);
    std::string_view den_text = text.substr(slash + 1);
    if (!detail::all_digits(den_text))
      throw parse_error("malformed rational \"" + std::string(whole) + "\"");
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw parse_error("zero denominator in \"" + std::string(whole) + "\"");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool neg = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      neg = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !detail::all_digits(int_part)) ||
        (!frac_part.empty() && !detail::all_digits(frac_part)))
      throw parse_error("malformed decimal \"" + std::string(whole) + "\"");
    std::string digits = std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    if (neg) num = -num;
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }

  return Rational(mpq_class(detail::parse_integer(text, whole)));
}

}  // namespace cake
