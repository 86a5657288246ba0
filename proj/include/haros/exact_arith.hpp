#pragma once

/**
 * @file exact_arith.hpp
 * @brief Exact rationals, canonical continued fractions, convergents and
 * continuant polynomials.
 *
 * Every quantity in the library is an exact integer or an exact reduced
 * fraction. Integers are arbitrary precision (Boost.Multiprecision cpp_int)
 * since denominators grow geometrically with depth in the Farey tree.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace haros {

using BigInt = boost::multiprecision::cpp_int;

/// Converts a non-negative BigInt to uint64, throwing std::overflow_error if it
/// does not fit.
inline std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("integer " + v.str() + " does not fit in 64 bits");
  }
  return v.convert_to<std::uint64_t>();
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

/**
 * Exact rational number, always stored in lowest terms with a positive
 * denominator. Zero is 0/1.
 */
class Rational {
 public:
  /// Tag for constructing from a pair already known to be coprime (den > 0).
  struct coprime_t {};
  static constexpr coprime_t coprime{};

  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design of numeric types
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
  Rational(BigInt num, BigInt den, coprime_t) : num_(std::move(num)), den_(std::move(den)) {}

  /// Parses "p/q" or "p" (optional leading '-'). Throws std::invalid_argument
  /// naming the offending token.
  static Rational parse(std::string_view text);

  /// Exact value of a finite double (every finite double is a dyadic rational).
  static Rational from_double(double x);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_.sign(); }

  double to_double() const;
  std::string str() const { return num_.str() + "/" + den_.str(); }

  Rational operator-() const { return Rational(-num_, den_, coprime); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

namespace detail {

inline BigInt parse_integer(std::string_view token, std::string_view whole) {
  std::string_view digits = token;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  bool ok = !digits.empty();
  for (char c : digits) ok = ok && c >= '0' && c <= '9';
  if (!ok) {
    throw std::invalid_argument("malformed fraction '" + std::string(whole) + "': bad token '" +
                                std::string(token) + "'");
  }
  return BigInt(std::string(token.front() == '+' ? token.substr(1) : token));
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, text), BigInt(1));
  BigInt n = detail::parse_integer(text.substr(0, slash), text);
  BigInt d = detail::parse_integer(text.substr(slash + 1), text);
  if (d == 0) {
    throw std::invalid_argument("malformed fraction '" + std::string(text) + "': bad token '" +
                                std::string(text.substr(slash + 1)) + "' (zero denominator)");
  }
  return Rational(std::move(n), std::move(d));
}

inline Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double has no rational value");
  if (x == 0.0) return Rational();
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  return Rational(std::move(num), std::move(den));
}

inline double Rational::to_double() const {
  constexpr std::int64_t kExact = std::int64_t{1} << 53;
  if (boost::multiprecision::abs(num_) <= kExact && den_ <= kExact) {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }
  return boost::multiprecision::cpp_rational(num_, den_).convert_to<double>();
}

/**
 * Euler's continuant K_n(x_1, ..., x_n).
 *
 * K_0() = 1, K_1(x_1) = x_1, K_n = x_n K_{n-1}(x_1..x_{n-1}) + K_{n-2}(x_1..x_{n-2}).
 * Accepts any integer entries (zeros included), so it also evaluates shifted or
 * non-canonical term lists.
 */
template <typename Int>
Int continuant(std::span<const Int> xs) {
  Int prev(0);  // K_{-1}
  Int cur(1);   // K_0
  for (const Int& x : xs) {
    Int next = x * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

template <typename Int>
Int continuant(const std::vector<Int>& xs) {
  return continuant(std::span<const Int>(xs));
}

/**
 * Canonical continued fraction [a_1, ..., a_m] of a value in (0, 1].
 *
 * Invariants: m >= 1, every a_i >= 1, and a_m >= 2 unless the list is the
 * single term [1] (the value 1).
 */
class ContinuedFraction {
 public:
  /// Validates canonical form; throws std::invalid_argument otherwise.
  explicit ContinuedFraction(std::vector<BigInt> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("continued fraction needs at least one term");
    for (const auto& a : terms_) {
      if (a < 1) throw std::invalid_argument("continued fraction terms must be >= 1, got " + a.str());
    }
    if (terms_.size() >= 2 && terms_.back() < 2) {
      throw std::invalid_argument("non-canonical continued fraction: trailing term 1");
    }
  }

  std::span<const BigInt> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const BigInt& operator[](std::size_t i) const { return terms_[i]; }

  /// a_1 + ... + a_m, the Farey-tree level of the value.
  BigInt term_sum() const {
    BigInt s(0);
    for (const auto& a : terms_) s += a;
    return s;
  }

  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;

 private:
  std::vector<BigInt> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const ContinuedFraction& cf) {
  os << '[';
  for (std::size_t i = 0; i < cf.size(); ++i) os << (i ? "," : "") << cf[i];
  return os << ']';
}

/// Canonical expansion of x in (0, 1] by the Euclidean algorithm.
inline ContinuedFraction cf_expand(const Rational& x) {
  if (x.sign() <= 0 || x.num() > x.den()) {
    throw std::domain_error("cf_expand needs 0 < x <= 1, got " + x.str());
  }
  std::vector<BigInt> terms;
  BigInt n = x.den();
  BigInt d = x.num();
  while (d != 0) {
    BigInt q;
    BigInt r;
    boost::multiprecision::divide_qr(n, d, q, r);
    terms.push_back(std::move(q));
    n = std::move(d);
    d = std::move(r);
  }
  return ContinuedFraction(std::move(terms));
}

/// Value K_{m-1}(a_2..a_m) / K_m(a_1..a_m); the pair is always coprime.
inline Rational cf_value(const ContinuedFraction& cf) {
  const auto terms = cf.terms();
  BigInt den = continuant(terms);
  BigInt num = continuant(terms.subspan(1));
  return Rational(std::move(num), std::move(den), Rational::coprime);
}

/**
 * Convergents p_k/q_k, k = 1..m, seeded with p_0 = 0, q_0 = 1, p_{-1} = 1,
 * q_{-1} = 0 so that p_1/q_1 = 1/a_1.
 */
inline std::vector<Rational> convergents(const ContinuedFraction& cf) {
  std::vector<Rational> out;
  out.reserve(cf.size());
  BigInt p_prev(1), q_prev(0);  // k = -1
  BigInt p(0), q(1);            // k = 0
  for (const auto& a : cf.terms()) {
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    out.emplace_back(p, q, Rational::coprime);
  }
  return out;
}

}  // namespace haros
