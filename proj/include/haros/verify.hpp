#pragma once

/**
 * @file verify.hpp
 * @brief Self-check suites run by `haros verify`: continuant identities, CF and
 * path round trips, three-way agreement of the distribution routes, the
 * descendant recurrences on tree levels, and piecewise linearity of P(k, .).
 *
 * Each suite counts individual checks and keeps the first counterexample,
 * rendered with exact fractions.
 */

#include "haros/degree_dist.hpp"
#include "haros/haros_graph.hpp"
#include "haros/sweep.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace haros {

struct CheckTally {
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::optional<std::string> first_failure;

  /// Counts one check; `describe` is only invoked for the first failure.
  template <typename Describe>
  bool expect(bool ok, Describe&& describe) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      if (!first_failure) first_failure = describe();
    }
    return ok;
  }

  void merge(const CheckTally& other) {
    passed += other.passed;
    failed += other.failed;
    if (!first_failure && other.first_failure) first_failure = other.first_failure;
  }
};

namespace detail {

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << ']';
  return os.str();
}

/// Calls fn(list) for every list of length `len` with entries in [1, max_term].
inline void for_each_term_list(std::size_t len, int max_term, const std::function<void(const std::vector<BigInt>&)>& fn) {
  std::vector<int> idx(len, 1);
  std::vector<BigInt> xs(len, BigInt(1));
  while (true) {
    fn(xs);
    std::size_t i = 0;
    while (i < len && idx[i] == max_term) {
      idx[i] = 1;
      xs[i] = 1;
      ++i;
    }
    if (i == len) return;
    ++idx[i];
    xs[i] = idx[i];
  }
}

inline BigInt K(std::span<const BigInt> xs) { return continuant(xs); }

/// Denominator of [a_{l+1} - 1, a_{l+2}, ..., a_t] for 1-based l and t; K_{-1} = 0 when t < l.
inline BigInt shifted_denominator(std::span<const BigInt> a, std::size_t l, std::size_t t) {
  if (t < l) return BigInt(0);
  std::vector<BigInt> xs(a.begin() + static_cast<std::ptrdiff_t>(l), a.begin() + static_cast<std::ptrdiff_t>(t));
  if (!xs.empty()) xs.front() -= 1;
  return continuant(std::span<const BigInt>(xs));
}

/// Nodes of degree k other than the identified boundary node.
inline std::uint64_t count_of(const IdentifiedDegreeMultiset& ms, std::uint64_t k) {
  auto it = ms.counts.find(k);
  const std::uint64_t n = it == ms.counts.end() ? 0 : it->second;
  return k == ms.boundary_degree ? n - 1 : n;
}

}  // namespace detail

/// Splitting and determinant identities of continuants on every list with the
/// given length range and term bound.
inline CheckTally check_continuant_identities(std::size_t min_len, std::size_t max_len, int max_term) {
  CheckTally t;
  for (std::size_t n = std::max<std::size_t>(min_len, 2); n <= max_len; ++n) {
    detail::for_each_term_list(n, max_term, [&](const std::vector<BigInt>& xs) {
      const std::span<const BigInt> s(xs);
      const BigInt whole = detail::K(s);
      for (std::size_t m = 1; m < n; ++m) {
        const BigInt split = detail::K(s.first(m)) * detail::K(s.subspan(m)) +
                             detail::K(s.first(m - 1)) * detail::K(s.subspan(m + 1));
        t.expect(split == whole, [&] {
          return "splitting identity fails for " + detail::join(xs) + " at m=" + std::to_string(m);
        });
      }
      const BigInt det = whole * detail::K(s.subspan(1, n - 2)) - detail::K(s.first(n - 1)) * detail::K(s.subspan(1));
      const BigInt expected = (n % 2 == 0) ? BigInt(1) : BigInt(-1);
      t.expect(det == expected, [&] { return "determinant identity fails for " + detail::join(xs) + ": got " + det.str(); });
    });
  }
  return t;
}

/// CF expansion, convergents, continuants and the symbolic path of every x in F_n.
inline CheckTally check_cf_and_paths(std::int64_t order) {
  CheckTally t;
  for (const Rational& x : farey_sequence(order)) {
    if (x.is_zero()) continue;
    const ContinuedFraction cf = cf_expand(x);
    const auto terms = cf.terms();
    t.expect(cf_value(cf) == x, [&] { return "cf_value(cf_expand(" + x.str() + ")) != x"; });
    t.expect(continuant(terms) == x.den() && continuant(terms.subspan(1)) == x.num(),
             [&] { return "continuants do not give numerator/denominator of " + x.str(); });

    const auto conv = convergents(cf);
    t.expect(conv.back() == x, [&] { return "last convergent of " + x.str() + " is " + conv.back().str(); });
    BigInt fib_prev(1), fib(1);  // Fib(k), Fib(k+1) for k = 1
    for (std::size_t k = 0; k < conv.size(); ++k) {
      t.expect(conv[k].den() >= fib, [&] { return "denominator growth fails at " + conv[k].str(); });
      BigInt next = fib + fib_prev;
      fib_prev = std::move(fib);
      fib = std::move(next);
      if (k == 0) continue;
      const BigInt det = conv[k].num() * conv[k - 1].den() - conv[k - 1].num() * conv[k].den();
      t.expect(det == 1 || det == -1, [&] {
        return "convergents " + conv[k - 1].str() + ", " + conv[k].str() + " of " + x.str() + " are not unimodular";
      });
    }

    if (x.num() == x.den()) continue;
    const SymbolicPath path = symbolic_path(x);
    std::vector<BigInt> lengths(terms.begin(), terms.end());
    lengths.back() -= 1;
    if (lengths.back() == 0) lengths.pop_back();
    bool runs_ok = path.runs.size() == lengths.size();
    for (std::size_t i = 0; runs_ok && i < lengths.size(); ++i) {
      runs_ok = path.runs[i].count == lengths[i] && path.runs[i].dir == (i % 2 ? Direction::R : Direction::L);
    }
    t.expect(runs_ok, [&] { return "symbolic path of " + x.str() + " is " + path.compact(); });
    t.expect(replay(path).node() == x, [&] { return "replaying the path of " + x.str() + " misses it"; });
    t.expect(tree_level_of(x) == path.length() + 1, [&] { return "level of " + x.str() + " != path length + 1"; });
  }
  return t;
}

/// Continued-fraction form == explicit graph at every degree, interval form ==
/// continued-fraction form for k >= 5, plus normalization, mean degree and
/// graph size for every x in F_n.
inline CheckTally check_triple_equality(std::int64_t order, unsigned threads = 0,
                                        std::uint64_t max_q = kMaxBuildDenominator) {
  const std::vector<Rational> xs = farey_sequence(order);
  std::vector<CheckTally> per(xs.size());
  detail::parallel_for(xs.size(), threads, [&](std::size_t i) {
    const Rational& x = xs[i];
    CheckTally& t = per[i];
    const DegreeDistribution by_cf = thm1_distribution(x);
    const DegreeDistribution by_graph = degree_distribution_oracle(x, max_q);
    t.expect(by_cf == by_graph, [&] {
      std::ostringstream os;
      os << "P(., " << x << "): continued-fraction form " << by_cf << " != graph " << by_graph;
      return os.str();
    });
    const HarosGraph g = build(x, max_q);
    const std::uint64_t q = to_u64(x.den());
    t.expect(g.node_count() == q + 1 && g.edge_count() == 2 * q - 1, [&] {
      return "G_" + x.str() + " has " + std::to_string(g.node_count()) + " nodes and " +
             std::to_string(g.edge_count()) + " edges";
    });
    if (x.is_zero() || x.num() == x.den()) return;
    t.expect(by_cf.total() == Rational(1), [&] { return "P(., " + x.str() + ") sums to " + by_cf.total().str(); });
    const Rational mean(4 * x.den() - 2, x.den());
    t.expect(by_cf.mean_degree() == mean, [&] { return "mean degree of G_" + x.str() + " is " + by_cf.mean_degree().str(); });
    const std::uint64_t last = to_u64(tree_level_of(x) + 2);
    for (std::uint64_t k = 5; k <= last; ++k) {
      const Rational p2 = thm2_eval(k, x);
      t.expect(p2 == by_cf.at(k), [&] {
        return "P(" + std::to_string(k) + ", " + x.str() + "): interval form " + p2.str() +
               " != continued-fraction form " + by_cf.at(k).str();
      });
    }
  });
  CheckTally out;
  for (const auto& t : per) out.merge(t);
  return out;
}

/**
 * Descendant recurrences on every node x < 1/2 of levels 3..max_level. Counts
 * come from explicit graphs and leave out the identified boundary node, whose
 * degree can coincide with an emergent degree of the smaller summand (1/3 has
 * boundary degree 5 = k_1 of 2/5). The closed forms come from continuants.
 *
 *  - continuing child [a_1..a_m + 1] = x (+) its (m-1)-th convergent:
 *      count(k_l) = count_x(k_l) + count_conv(k_l) = s^(l,m-2) + (a_m + 1) s^(l,m-1), l <= m-2,
 *      count(k_{m-1}) = count_x(k_{m-1}) + 1 = a_m;
 *  - turning child [a_1..a_m - 1, 2] = x (+) a/b with a/b = [a_1..a_m - 1]:
 *      count(k_l) = count_x(k_l) + count_ab(k_l) = 2 s_ab^(l,m) + s_ab^(l,m-1), l <= m-1.
 */
inline CheckTally check_descendant_recurrences(std::int64_t min_level, std::int64_t max_level) {
  CheckTally t;
  for (std::int64_t level = std::max<std::int64_t>(min_level, 3); level <= max_level; ++level) {
    for (const Rational& x : tree_level(level).fractions) {
      if (x.num() * 2 >= x.den()) continue;
      const ContinuedFraction cf = cf_expand(x);
      const std::size_t m = cf.size();
      std::vector<BigInt> a(cf.terms().begin(), cf.terms().end());

      std::vector<BigInt> cont_terms = a;
      cont_terms.back() += 1;
      std::vector<BigInt> turn_terms = a;
      turn_terms.back() -= 1;
      turn_terms.push_back(BigInt(2));
      const Rational cont_child = cf_value(ContinuedFraction(cont_terms));
      const Rational turn_child = cf_value(ContinuedFraction(turn_terms));

      const auto [left, right] = tree_children(x);
      const bool cont_is_left = (m % 2 == 1);
      t.expect(cont_is_left ? (left == cont_child && right == turn_child) : (right == cont_child && left == turn_child),
               [&] {
                 return "children of " + x.str() + " are (" + left.str() + ", " + right.str() +
                        ") but CF rules give continuing " + cont_child.str() + ", turning " + turn_child.str();
               });

      const auto ms_x = identify_boundary(build(x));
      const auto ms_cont = identify_boundary(build(cont_child));
      const auto ms_turn = identify_boundary(build(turn_child));
      std::vector<BigInt> ab_terms = a;
      ab_terms.back() -= 1;
      const Rational ab(continuant(std::span<const BigInt>(ab_terms).subspan(1)), continuant(std::span<const BigInt>(ab_terms)));
      const auto ms_ab = identify_boundary(build(ab));
      std::optional<IdentifiedDegreeMultiset> ms_conv;
      if (m >= 2) ms_conv = identify_boundary(build(convergents(cf)[m - 2]));

      std::uint64_t k_l = 3;
      for (std::size_t l = 1; l < m; ++l) {
        k_l += to_u64(a[l - 1]);
        const auto tag = [&](const char* which) {
          return std::string(which) + " recurrence fails at x=" + x.str() + ", l=" + std::to_string(l) +
                 ", k=" + std::to_string(k_l);
        };
        const std::uint64_t c_cont = detail::count_of(ms_cont, k_l);
        if (l + 2 <= m) {
          const BigInt closed = detail::shifted_denominator(a, l, m - 2) + (a[m - 1] + 1) * detail::shifted_denominator(a, l, m - 1);
          t.expect(c_cont == detail::count_of(ms_x, k_l) + detail::count_of(*ms_conv, k_l) && closed == c_cont,
                   [&] { return tag("continuing-descent"); });
        } else {
          t.expect(c_cont == detail::count_of(ms_x, k_l) + 1 && a[m - 1] == c_cont, [&] { return tag("continuing-descent"); });
        }
        const std::uint64_t c_turn = detail::count_of(ms_turn, k_l);
        const BigInt closed_turn = 2 * detail::shifted_denominator(ab_terms, l, m) + detail::shifted_denominator(ab_terms, l, m - 1);
        t.expect(c_turn == detail::count_of(ms_x, k_l) + detail::count_of(ms_ab, k_l) && closed_turn == c_turn,
                 [&] { return tag("turning-descent"); });
      }
      const std::uint64_t merged = to_u64(cf.term_sum() + 2);
      t.expect(detail::count_of(ms_turn, merged) == 1,
               [&] { return "turning child of " + x.str() + " lacks a single node of degree " + std::to_string(merged); });
    }
  }
  return t;
}

/**
 * Piecewise linearity for each k in k_set over F_n, using the continued-fraction
 * values as data:
 *  - samples inside each open subinterval (child, pivot) and (pivot, child) are collinear;
 *  - the two linear pieces meet at the pivot with a positive value and vanish at the children;
 *  - off the fractions of level <= k-2, P(k, x) equals the continuous tent built from the brackets.
 */
inline CheckTally check_piecewise_linearity(const std::vector<std::uint64_t>& k_set, std::int64_t order) {
  CheckTally t;
  std::vector<Rational> xs = farey_sequence(order);
  xs.erase(xs.begin());
  xs.pop_back();
  std::vector<DegreeDistribution> dist;
  std::vector<BigInt> level;
  dist.reserve(xs.size());
  for (const auto& x : xs) {
    dist.push_back(thm1_distribution(x));
    level.push_back(tree_level_of(x));
  }

  for (std::uint64_t k : k_set) {
    struct Piece {
      Rational lower, pivot, upper;
    };
    std::vector<Piece> pieces;
    for (const Rational& pivot : tree_level(static_cast<std::int64_t>(k) - 3).fractions) {
      auto [lo, up] = tree_children(pivot);
      pieces.push_back({lo, pivot, up});
    }
    const auto lower_line = [](const Piece& pc, const Rational& x) { return Rational(pc.lower.den(), BigInt(1)) * x - Rational(pc.lower.num(), BigInt(1)); };
    const auto upper_line = [](const Piece& pc, const Rational& x) { return Rational(pc.upper.num(), BigInt(1)) - Rational(pc.upper.den(), BigInt(1)) * x; };
    const std::string ks = std::to_string(k);

    for (const Piece& pc : pieces) {
      const Rational peak_lo = lower_line(pc, pc.pivot);
      const Rational peak_up = upper_line(pc, pc.pivot);
      t.expect(peak_lo == peak_up && peak_lo.sign() > 0, [&] {
        return "k=" + ks + ": pieces at pivot " + pc.pivot.str() + " give " + peak_lo.str() + " and " + peak_up.str();
      });
      t.expect(lower_line(pc, pc.lower).is_zero() && upper_line(pc, pc.upper).is_zero(),
               [&] { return "k=" + ks + ": pieces around " + pc.pivot.str() + " do not vanish at the children"; });

      for (int side = 0; side < 2; ++side) {
        const Rational& a = side == 0 ? pc.lower : pc.pivot;
        const Rational& b = side == 0 ? pc.pivot : pc.upper;
        auto first = std::upper_bound(xs.begin(), xs.end(), a);
        auto last = std::lower_bound(xs.begin(), xs.end(), b);
        std::vector<std::size_t> inside;
        for (auto it = first; it != last; ++it) {
          const auto i = static_cast<std::size_t>(it - xs.begin());
          if (level[i] > BigInt(k - 2)) inside.push_back(i);
        }
        if (inside.size() < 3) continue;
        const Rational& x0 = xs[inside[0]];
        const Rational y0 = dist[inside[0]].at(k);
        const Rational& x1 = xs[inside[1]];
        const Rational y1 = dist[inside[1]].at(k);
        for (std::size_t j = 2; j < inside.size(); ++j) {
          const Rational& x = xs[inside[j]];
          const Rational y = dist[inside[j]].at(k);
          t.expect((y - y0) * (x1 - x0) == (y1 - y0) * (x - x0), [&] {
            return "k=" + ks + ": (" + x.str() + ", " + y.str() + ") is off the line through (" + x0.str() + ", " +
                   y0.str() + ") and (" + x1.str() + ", " + y1.str() + ")";
          });
        }
      }
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (level[i] <= BigInt(k - 2)) continue;
      const Rational& x = xs[i];
      auto it = std::upper_bound(pieces.begin(), pieces.end(), x, [](const Rational& v, const Piece& pc) { return v < pc.upper; });
      Rational tent;
      if (it != pieces.end() && it->lower < x) tent = x <= it->pivot ? lower_line(*it, x) : upper_line(*it, x);
      t.expect(dist[i].at(k) == tent, [&] {
        return "k=" + ks + ": P(k, " + x.str() + ") = " + dist[i].at(k).str() + " departs from the continuous envelope " +
               tent.str() + " at a non-breakpoint";
      });
    }
  }
  return t;
}

}  // namespace haros
