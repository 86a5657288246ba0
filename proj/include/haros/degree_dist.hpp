#pragma once

/**
 * @file degree_dist.hpp
 * @brief Closed forms for the degree distribution P(k, x) of Haros graphs.
 *
 * Two routes, both exact:
 *  - the continued-fraction form: with x = [a_1, ..., a_m] in (0, 1/2],
 *    P(2) = p/q, P(3) = (q - 2p)/q, P(a_1 + ... + a_l + 3) = s_l / q where
 *    s_l is the denominator of [a_{l+1} - 1, a_{l+2}, ..., a_m], and the
 *    boundary node contributes 1/q at degree a_1 + ... + a_m + 2;
 *  - the interval form for k >= 5: P(k, x) is linear on each side of every
 *    level-(k-3) pivot, reaching 0 at the pivot's level-(k-2) children.
 *
 * Both are stated on [0, 1/2]; for x > 1/2 we use P(k, x) = P(k, 1 - x).
 */

#include "haros/distribution.hpp"
#include "haros/exact_arith.hpp"
#include "haros/farey_tree.hpp"

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace haros {

namespace detail {

inline bool in_unit_interval(const Rational& x) { return x.sign() >= 0 && x.num() <= x.den(); }
inline bool is_endpoint(const Rational& x) { return x.is_zero() || x.num() == x.den(); }
inline Rational fold_to_lower_half(const Rational& x) {
  return (x.num() * 2 > x.den()) ? Rational(1) - x : x;
}

}  // namespace detail

/**
 * P(k, x) for k in {2, 3, 4} from the elementary formulas: (x, 1 - 2x, 0) on
 * [0, 1/2] and (1 - x, 2x - 1, 0) on [1/2, 1]. At x in {0, 1} the distribution
 * is zero by convention. The k = 4 value at x = 1/2 is the literal 0; the true
 * P(4, 1/2) = 1/2 comes from the boundary term of thm1_distribution.
 */
inline Rational base_case(int k, const Rational& x) {
  if (k < 2 || k > 4) throw std::invalid_argument("base_case handles k = 2, 3, 4 only");
  if (!detail::in_unit_interval(x)) throw std::domain_error("x must lie in [0, 1], got " + x.str());
  if (detail::is_endpoint(x)) return Rational();
  const Rational y = detail::fold_to_lower_half(x);
  switch (k) {
    case 2: return y;
    case 3: return Rational(1) - Rational(2) * y;
    default: return Rational();
  }
}

/// One emergent degree k_l = a_1 + ... + a_l + 3 and r_l/s_l = [a_{l+1} - 1, ..., a_m].
struct TruncationRow {
  std::size_t l = 0;
  std::uint64_t degree = 0;
  BigInt r;
  BigInt s;
};

using TruncationTable = std::vector<TruncationRow>;

/**
 * Rows l = 1..m-1 of the truncation table. Uses suffix continuants
 * S_j = K(a_j..a_m): s_l = S_{l+1} - S_{l+2} and r_l = S_{l+2}, so the whole
 * table costs O(m) big-integer operations.
 */
inline TruncationTable truncation_table(const ContinuedFraction& cf) {
  const std::size_t m = cf.size();
  // suffix[j] = K(a_{j+1}, ..., a_m) with 0-based j; suffix[m] = 1, suffix[m+1] = 0.
  std::vector<BigInt> suffix(m + 2);
  suffix[m + 1] = 0;
  suffix[m] = 1;
  for (std::size_t j = m; j-- > 0;) suffix[j] = cf[j] * suffix[j + 1] + suffix[j + 2];

  TruncationTable table;
  table.reserve(m ? m - 1 : 0);
  BigInt partial(3);
  for (std::size_t l = 1; l < m; ++l) {
    partial += cf[l - 1];
    table.push_back({l, to_u64(partial), suffix[l + 1], suffix[l] - suffix[l + 1]});
  }
  return table;
}

/// Full P(., x) from the continued-fraction form. Empty for x in {0, 1}.
inline DegreeDistribution thm1_distribution(const Rational& x) {
  if (!detail::in_unit_interval(x)) throw std::domain_error("x must lie in [0, 1], got " + x.str());
  DegreeDistribution dist;
  dist.denominator = x.den();
  if (detail::is_endpoint(x)) return dist;

  const Rational y = detail::fold_to_lower_half(x);
  const BigInt& p = y.num();
  const BigInt& q = y.den();
  const ContinuedFraction cf = cf_expand(y);

  dist.set(2, Rational(p, q));
  dist.set(3, Rational(q - 2 * p, q));
  for (const auto& row : truncation_table(cf)) dist.set(row.degree, Rational(row.s, q));
  dist.set(to_u64(cf.term_sum() + 2), Rational(BigInt(1), q));
  return dist;
}

/// P(k, x) for k >= 5 from the interval form.
inline Rational thm2_eval(std::uint64_t k, const Rational& x) {
  const EnclosingBracket loc = locate_for_degree(k, x);
  const Rational& y = loc.located;
  switch (loc.side) {
    case BracketSide::LowerSubinterval: {
      const Rational& lo = loc.bracket->lower;
      return Rational(lo.den() * y.num() - lo.num() * y.den(), y.den());
    }
    case BracketSide::UpperSubinterval: {
      const Rational& up = loc.bracket->upper;
      return Rational(up.num() * y.den() - up.den() * y.num(), y.den());
    }
    case BracketSide::AtLevelKMinus2:
      return Rational(BigInt(1), y.den());
    case BracketSide::AtPivot:
    case BracketSide::Elsewhere:
      break;
  }
  return Rational();
}

/**
 * P(., x) assembled from the elementary formulas (k <= 4) and the interval
 * form (k >= 5). The only use of the tree depth is to bound the k >= 5 scan:
 * beyond level(x) + 2 every bracket lookup is "shallower" and yields 0.
 * Throws std::length_error when that scan would go past degree max_k.
 */
inline DegreeDistribution thm2_distribution(const Rational& x, std::uint64_t max_k = 10'000'000) {
  if (!detail::in_unit_interval(x)) throw std::domain_error("x must lie in [0, 1], got " + x.str());
  DegreeDistribution dist;
  dist.denominator = x.den();
  if (detail::is_endpoint(x)) return dist;

  dist.set(2, base_case(2, x));
  dist.set(3, base_case(3, x));
  const Rational y = detail::fold_to_lower_half(x);
  // G_{1/2} is the only graph whose boundary node has degree 4.
  dist.set(4, y == Rational(BigInt(1), BigInt(2)) ? y : base_case(4, x));

  const BigInt level = symbolic_path(y).length() + 1;
  if (level + 2 > max_k) {
    throw std::length_error("interval-form scan up to degree " + BigInt(level + 2).str() + " exceeds cap");
  }
  const std::uint64_t last = to_u64(level + 2);
  for (std::uint64_t k = 5; k <= last; ++k) dist.set(k, thm2_eval(k, y));
  return dist;
}

/// Raised by thm2_eval_real when x is too close to a breakpoint to pick a side.
class ambiguous_breakpoint_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * Floating-point evaluation of the interval form. x is converted to its exact
 * dyadic value, the bracket is located exactly, and the linear piece is then
 * evaluated in double precision. Fails with ambiguous_breakpoint_error when x
 * lies within a few ulps of a fraction of level <= k - 2, where the exact
 * value jumps.
 */
inline double thm2_eval_real(std::uint64_t k, double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("thm2_eval_real needs 0 < x < 1");
  const Rational exact = Rational::from_double(x);
  const EnclosingBracket loc = locate_for_degree(k, exact);
  const Rational& y = loc.located;
  const double yd = y.to_double();

  // Nearest breakpoints: the Farey parents of y's ancestor at level k - 1.
  const SymbolicPath path = symbolic_path(y);
  const BigInt level = path.length() + 1;
  const BigInt guard_level(k - 1);
  if (level < guard_level) {
    throw ambiguous_breakpoint_error("x = " + exact.str() + " is itself a breakpoint for k = " + std::to_string(k));
  }
  const TreeCursor guard = cursor_at_depth(path, guard_level - 1);
  const double tol = 4.0 * DBL_EPSILON * std::max(1.0, std::fabs(yd));
  const double gap_lo = (y - guard.lower_parent()).to_double();
  const double gap_hi = (guard.upper_parent() - y).to_double();
  if (gap_lo <= tol || gap_hi <= tol) {
    throw ambiguous_breakpoint_error("x = " + std::to_string(x) + " is within machine precision of a breakpoint for k = " +
                                     std::to_string(k));
  }

  switch (loc.side) {
    case BracketSide::LowerSubinterval:
      return loc.bracket->lower.den().convert_to<double>() * yd - loc.bracket->lower.num().convert_to<double>();
    case BracketSide::UpperSubinterval:
      return loc.bracket->upper.num().convert_to<double>() - loc.bracket->upper.den().convert_to<double>() * yd;
    default:
      return 0.0;
  }
}

}  // namespace haros
