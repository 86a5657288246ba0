#pragma once

/**
 * @file farey_tree.hpp
 * @brief Farey sequences, the Farey binary tree on [0, 1], symbolic L/R paths
 * and the bracket location used by the interval form of P(k, x).
 *
 * Tree conventions:
 *  - level 1 holds 0/1 and 1/1; level k >= 2 holds 2^(k-2) mediants;
 *  - a node is identified by its two Farey parents (lo, hi) and equals
 *    their mediant;
 *  - a descent word starts above 1/2: its first symbol is always L and lands
 *    on 1/2, so [a_1, ..., a_m] has word L^a_1 R^a_2 ... X^(a_m - 1).
 */

#include "haros/exact_arith.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haros {

/// True when p/q and r/s are Farey neighbours, |p s - q r| = 1.
inline bool farey_adjacent(const Rational& a, const Rational& b) {
  BigInt det = a.num() * b.den() - a.den() * b.num();
  return det == 1 || det == -1;
}

/// Mediant of two adjacent fractions left < right; the result is already reduced.
inline Rational mediant(const Rational& left, const Rational& right) {
  if (!(left < right) || !farey_adjacent(left, right)) {
    throw std::invalid_argument("mediant needs Farey-adjacent fractions left < right, got " +
                                left.str() + " and " + right.str());
  }
  return Rational(left.num() + right.num(), left.den() + right.den(), Rational::coprime);
}

/// F_n: all reduced fractions in [0, 1] with denominator <= n, increasing.
inline std::vector<Rational> farey_sequence(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("farey_sequence needs n >= 1");
  std::vector<Rational> out;
  std::int64_t a = 0, b = 1, c = 1, d = n;
  out.emplace_back(BigInt(a), BigInt(b), Rational::coprime);
  while (c <= n) {
    const std::int64_t k = (n + b) / d;
    const std::int64_t e = k * c - a;
    const std::int64_t f = k * d - b;
    a = c;
    b = d;
    c = e;
    d = f;
    out.emplace_back(BigInt(a), BigInt(b), Rational::coprime);
  }
  return out;
}

enum class Direction : std::uint8_t { L, R };

inline char to_char(Direction d) { return d == Direction::L ? 'L' : 'R'; }
inline Direction flip(Direction d) { return d == Direction::L ? Direction::R : Direction::L; }

/// Run-length encoded descent word; run symbols strictly alternate.
struct SymbolicPath {
  struct Run {
    Direction dir;
    BigInt count;
    friend bool operator==(const Run&, const Run&) = default;
  };
  std::vector<Run> runs;

  BigInt length() const {
    BigInt n(0);
    for (const auto& r : runs) n += r.count;
    return n;
  }

  /// Expanded word such as "LLRRRLL". Throws std::length_error past max_len symbols.
  std::string word(std::size_t max_len = 1u << 20) const {
    if (length() > max_len) throw std::length_error("symbolic path too long to expand");
    std::string s;
    for (const auto& r : runs) s.append(r.count.convert_to<std::size_t>(), to_char(r.dir));
    return s;
  }

  /// Compact form such as "L^2 R^3 L^2".
  std::string compact() const {
    std::string s;
    for (const auto& r : runs) {
      if (!s.empty()) s += ' ';
      s += to_char(r.dir);
      s += '^';
      s += r.count.str();
    }
    return s;
  }

  friend bool operator==(const SymbolicPath&, const SymbolicPath&) = default;
};

/// Descent word from above 1/2 down to x, for 0 < x < 1.
inline SymbolicPath symbolic_path(const Rational& x) {
  if (x.sign() <= 0 || x.num() >= x.den()) {
    throw std::domain_error("symbolic_path needs 0 < x < 1, got " + x.str());
  }
  const ContinuedFraction cf = cf_expand(x);
  SymbolicPath path;
  Direction dir = Direction::L;
  for (std::size_t i = 0; i < cf.size(); ++i, dir = flip(dir)) {
    BigInt count = cf[i];
    if (i + 1 == cf.size()) count -= 1;
    if (count > 0) path.runs.push_back({dir, std::move(count)});
  }
  return path;
}

/// Farey-tree level of x: 1 for 0 and 1, otherwise a_1 + ... + a_m.
inline BigInt tree_level_of(const Rational& x) {
  if (x.is_zero() || x.num() == x.den()) return BigInt(1);
  return cf_expand(x).term_sum();
}

/**
 * A position in the Farey tree: the node is the mediant of its two Farey
 * parents. Runs of t identical descents are applied in O(1) big-integer work.
 */
class TreeCursor {
 public:
  /// The node 1/2 with parents 0/1 and 1/1 (level 2).
  static TreeCursor top() { return TreeCursor(Rational(0), Rational(1)); }

  const Rational& lower_parent() const { return lo_; }
  const Rational& upper_parent() const { return hi_; }
  Rational node() const { return combine(lo_, BigInt(1), hi_, BigInt(1)); }
  Rational left_child() const { return combine(lo_, BigInt(2), hi_, BigInt(1)); }
  Rational right_child() const { return combine(lo_, BigInt(1), hi_, BigInt(2)); }

  /// Descends `count` steps in direction `dir`.
  void descend(Direction dir, const BigInt& count) {
    if (count <= 0) return;
    if (dir == Direction::L) {
      hi_ = combine(lo_, count, hi_, BigInt(1));
    } else {
      lo_ = combine(lo_, BigInt(1), hi_, count);
    }
  }

 private:
  TreeCursor(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

  // (u*lo (+) v*hi) taken as numerator/denominator sums; coprime for adjacent lo, hi.
  static Rational combine(const Rational& lo, const BigInt& u, const Rational& hi, const BigInt& v) {
    return Rational(u * lo.num() + v * hi.num(), u * lo.den() + v * hi.den(), Rational::coprime);
  }

  Rational lo_;
  Rational hi_;
};

/// Cursor after consuming the first `depth` >= 1 symbols of `path`.
inline TreeCursor cursor_at_depth(const SymbolicPath& path, const BigInt& depth) {
  if (depth < 1 || depth > path.length()) throw std::out_of_range("depth outside the symbolic path");
  TreeCursor cur = TreeCursor::top();
  BigInt remaining = depth - 1;  // the first L only enters the tree at 1/2
  bool first = true;
  for (const auto& run : path.runs) {
    BigInt take = first ? run.count - 1 : run.count;
    first = false;
    if (take > remaining) take = remaining;
    cur.descend(run.dir, take);
    remaining -= take;
    if (remaining == 0) break;
  }
  return cur;
}

/// Direction of the symbol at 1-based position `index` in the word.
inline Direction direction_at(const SymbolicPath& path, const BigInt& index) {
  BigInt seen(0);
  for (const auto& run : path.runs) {
    seen += run.count;
    if (index <= seen) return run.dir;
  }
  throw std::out_of_range("symbol index outside the symbolic path");
}

/// Replays the whole path; lands exactly on the original value.
inline TreeCursor replay(const SymbolicPath& path) { return cursor_at_depth(path, path.length()); }

/// Cursor positioned on x, 0 < x < 1.
inline TreeCursor cursor_at(const Rational& x) { return replay(symbolic_path(x)); }

/// The two tree children of x, in increasing numeric order.
inline std::pair<Rational, Rational> tree_children(const Rational& x) {
  const TreeCursor c = cursor_at(x);
  return {c.left_child(), c.right_child()};
}

struct TreeLevel {
  std::int64_t index = 0;
  std::vector<Rational> fractions;
};

/// Largest level tree_level will materialize (2^(k-2) fractions).
inline constexpr std::int64_t kMaxMaterializedLevel = 22;

/// Level k of the tree, left to right, by mediant expansion.
inline TreeLevel tree_level(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("tree level index must be >= 1");
  if (k > kMaxMaterializedLevel) {
    throw std::length_error("tree level " + std::to_string(k) + " has 2^" + std::to_string(k - 2) +
                            " fractions; limit is level " + std::to_string(kMaxMaterializedLevel));
  }
  TreeLevel level{k, {}};
  if (k == 1) {
    level.fractions = {Rational(0), Rational(1)};
    return level;
  }
  // Each entry is a (lo, hi) pair of Farey parents.
  std::vector<std::pair<Rational, Rational>> frontier{{Rational(0), Rational(1)}};
  for (std::int64_t j = 2; j < k; ++j) {
    std::vector<std::pair<Rational, Rational>> next;
    next.reserve(frontier.size() * 2);
    for (auto& [lo, hi] : frontier) {
      Rational m = mediant(lo, hi);
      next.emplace_back(lo, m);
      next.emplace_back(std::move(m), hi);
    }
    frontier = std::move(next);
  }
  level.fractions.reserve(frontier.size());
  for (const auto& [lo, hi] : frontier) level.fractions.push_back(mediant(lo, hi));
  return level;
}

/// Where x sits relative to the level-(k-3) pivots and their level-(k-2) children.
enum class BracketSide : std::uint8_t {
  LowerSubinterval,  // lower child < x < pivot
  UpperSubinterval,  // pivot < x < upper child
  AtPivot,           // x is a level-(k-3) fraction
  AtLevelKMinus2,    // x is a level-(k-2) fraction
  Elsewhere,         // shallower than level k-3, or outside every bracket
};

inline const char* to_string(BracketSide s) {
  switch (s) {
    case BracketSide::LowerSubinterval: return "lower-subinterval";
    case BracketSide::UpperSubinterval: return "upper-subinterval";
    case BracketSide::AtPivot: return "at-pivot";
    case BracketSide::AtLevelKMinus2: return "at-level-(k-2)";
    case BracketSide::Elsewhere: return "elsewhere";
  }
  return "?";
}

struct Bracket {
  Rational lower;  // level k-2
  Rational pivot;  // level k-3
  Rational upper;  // level k-2
  friend bool operator==(const Bracket&, const Bracket&) = default;
};

struct EnclosingBracket {
  BracketSide side = BracketSide::Elsewhere;
  std::optional<Bracket> bracket;  // absent when x is shallower than level k-3
  Rational located;                // the value actually located (x or 1 - x)
};

/**
 * Locates x among the brackets of degree k >= 5 by walking k-3 steps down x's
 * own path; no level is materialized. Values above 1/2 are mirrored to 1 - x
 * first.
 */
inline EnclosingBracket locate_for_degree(std::uint64_t k, const Rational& x) {
  if (k < 5) throw std::invalid_argument("locate_for_degree needs k >= 5");
  if (x.sign() < 0 || x.num() > x.den()) throw std::domain_error("x must lie in [0, 1]");
  EnclosingBracket out;
  out.located = (x.num() * 2 > x.den()) ? Rational(1) - x : x;
  if (out.located.is_zero()) return out;  // level 1

  const SymbolicPath path = symbolic_path(out.located);
  const BigInt level = path.length() + 1;
  const BigInt pivot_level(k - 3);
  if (level < pivot_level) return out;

  // Node at level j is reached after j-1 symbols.
  const TreeCursor pivot = cursor_at_depth(path, pivot_level - 1);
  out.bracket = Bracket{pivot.left_child(), pivot.node(), pivot.right_child()};
  if (level == pivot_level) {
    out.side = BracketSide::AtPivot;
    return out;
  }
  if (level == pivot_level + 1) {
    out.side = BracketSide::AtLevelKMinus2;
    return out;
  }
  const Direction into_child = direction_at(path, pivot_level);
  const Direction below_child = direction_at(path, pivot_level + 1);
  if (into_child == Direction::L && below_child == Direction::R) {
    out.side = BracketSide::LowerSubinterval;
  } else if (into_child == Direction::R && below_child == Direction::L) {
    out.side = BracketSide::UpperSubinterval;
  }
  return out;
}

}  // namespace haros
