#pragma once

/**
 * @file haros_graph.hpp
 * @brief Explicit Haros graphs as ordered degree sequences, the concatenation
 * operator, the path-driven builder and the brute-force distribution oracle.
 *
 * A Haros graph is determined by its degree sequence, so no adjacency
 * structure is kept. Degrees are listed left to right with the two extreme
 * nodes first and last.
 */

#include "haros/distribution.hpp"
#include "haros/exact_arith.hpp"
#include "haros/farey_tree.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haros {

using Degree = std::uint32_t;

/// Raised when a request would exceed a configured size cap.
class resource_limit_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Builds refuse denominators above this unless the caller passes a larger cap.
inline constexpr std::uint64_t kMaxBuildDenominator = 10'000'000;

struct HarosGraph {
  Rational label;
  std::vector<Degree> degrees;

  std::size_t node_count() const { return degrees.size(); }
  std::uint64_t edge_count() const {
    return std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0}) / 2;
  }

  friend bool operator==(const HarosGraph&, const HarosGraph&) = default;
};

/// G_0: two nodes joined by one edge, labelled 0/1 or 1/1.
inline HarosGraph initial_graph(Rational label) { return HarosGraph{std::move(label), {1, 1}}; }

/**
 * left (+) right: the facing extremes merge into one node and a new edge joins
 * the outer extremes. Labels must be Farey neighbours with left < right.
 */
inline HarosGraph concat(const HarosGraph& left, const HarosGraph& right) {
  HarosGraph out{mediant(left.label, right.label), {}};
  const auto& l = left.degrees;
  const auto& r = right.degrees;
  out.degrees.reserve(l.size() + r.size() - 1);
  out.degrees.insert(out.degrees.end(), l.begin(), l.end() - 1);
  out.degrees.push_back(l.back() + r.front());
  out.degrees.insert(out.degrees.end(), r.begin() + 1, r.end());
  out.degrees.front() += 1;
  out.degrees.back() += 1;
  return out;
}

namespace detail {

/**
 * Degree sequence that grows at both ends inside one preallocated buffer.
 * Final length is q + 1 and at most q entries are added on either side, so
 * a 2(q+1) buffer centred on the seed never reallocates.
 */
class TwoEndedSequence {
 public:
  TwoEndedSequence(std::size_t final_size, std::vector<Degree> seed)
      : buf_(2 * final_size + seed.size()), begin_(final_size), end_(final_size + seed.size()) {
    std::copy(seed.begin(), seed.end(), buf_.begin() + static_cast<std::ptrdiff_t>(begin_));
  }

  std::vector<Degree> to_vector() const {
    return {buf_.begin() + static_cast<std::ptrdiff_t>(begin_),
            buf_.begin() + static_cast<std::ptrdiff_t>(end_)};
  }

  /// this <- left (+) this
  void concat_on_left(const std::vector<Degree>& left) {
    buf_[begin_] += left.back();
    buf_[end_ - 1] += 1;
    const std::size_t add = left.size() - 1;
    begin_ -= add;
    std::copy(left.begin(), left.end() - 1, buf_.begin() + static_cast<std::ptrdiff_t>(begin_));
    buf_[begin_] += 1;
  }

  /// this <- this (+) right
  void concat_on_right(const std::vector<Degree>& right) {
    buf_[end_ - 1] += right.front();
    buf_[begin_] += 1;
    std::copy(right.begin() + 1, right.end(), buf_.begin() + static_cast<std::ptrdiff_t>(end_));
    end_ += right.size() - 1;
    buf_[end_ - 1] += 1;
  }

 private:
  std::vector<Degree> buf_;
  std::size_t begin_;
  std::size_t end_;
};

}  // namespace detail

/**
 * G_x for a reduced x in [0, 1], built by replaying x's descent word. The
 * builder keeps the graphs of both Farey parents of the current node; an L
 * step concatenates the lower parent on the left, an R step the upper parent
 * on the right. Runs are applied in place, so cost is O(q * m) for m CF terms.
 *
 * Throws resource_limit_error when q exceeds max_q.
 */
inline HarosGraph build(const Rational& x, std::uint64_t max_q = kMaxBuildDenominator) {
  if (x.sign() < 0 || x.num() > x.den()) throw std::domain_error("build needs x in [0, 1], got " + x.str());
  if (x.den() > max_q) {
    throw resource_limit_error("denominator " + x.den().str() + " exceeds build cap " + std::to_string(max_q));
  }
  if (x.is_zero() || x.num() == x.den()) return initial_graph(x);

  const SymbolicPath path = symbolic_path(x);
  const std::size_t final_size = x.den().convert_to<std::size_t>() + 1;

  std::vector<Degree> lower{1, 1};  // graph of the lower Farey parent
  std::vector<Degree> upper{1, 1};  // graph of the upper Farey parent
  detail::TwoEndedSequence cur(final_size, {2, 2, 2});  // G_{1/2}, entered by the first L

  bool first = true;
  for (const auto& run : path.runs) {
    std::uint64_t steps = to_u64(run.count) - (first ? 1 : 0);
    first = false;
    if (steps == 0) continue;
    auto& parent = run.dir == Direction::L ? lower : upper;
    auto& replaced = run.dir == Direction::L ? upper : lower;
    for (std::uint64_t i = 0; i < steps; ++i) {
      if (i + 1 == steps) replaced = cur.to_vector();
      if (run.dir == Direction::L) {
        cur.concat_on_left(parent);
      } else {
        cur.concat_on_right(parent);
      }
    }
  }
  return HarosGraph{x, cur.to_vector()};
}

/// Degree counts after the two extreme nodes are identified as one boundary node.
struct IdentifiedDegreeMultiset {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t boundary_degree = 0;

  friend bool operator==(const IdentifiedDegreeMultiset&, const IdentifiedDegreeMultiset&) = default;
};

/// Merges the extremes of g (keeping their degree sum). Rejects G_0.
inline IdentifiedDegreeMultiset identify_boundary(const HarosGraph& g) {
  const auto& d = g.degrees;
  if (d.size() < 3) {
    throw std::invalid_argument("boundary identification is undefined for the initial graph G_0");
  }
  std::vector<std::uint64_t> tally;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] >= tally.size()) tally.resize(d[i] + 1);
    ++tally[d[i]];
  }
  IdentifiedDegreeMultiset out;
  out.boundary_degree = std::uint64_t{d.front()} + d.back();
  out.total = d.size() - 1;
  for (std::size_t k = 0; k < tally.size(); ++k) {
    if (tally[k]) out.counts[k] = tally[k];
  }
  ++out.counts[out.boundary_degree];
  return out;
}

/// Interior degrees in order followed by the boundary degree (q entries).
inline std::vector<std::uint64_t> identified_sequence(const HarosGraph& g) {
  if (g.degrees.size() < 3) {
    throw std::invalid_argument("boundary identification is undefined for the initial graph G_0");
  }
  std::vector<std::uint64_t> out(g.degrees.begin() + 1, g.degrees.end() - 1);
  out.push_back(std::uint64_t{g.degrees.front()} + g.degrees.back());
  return out;
}

/// P(k, x) counted on an explicitly built graph. Empty for x in {0, 1}.
inline DegreeDistribution degree_distribution_oracle(const Rational& x,
                                                     std::uint64_t max_q = kMaxBuildDenominator) {
  if (x.sign() < 0 || x.num() > x.den()) throw std::domain_error("x must lie in [0, 1], got " + x.str());
  DegreeDistribution dist;
  dist.denominator = x.den();
  if (x.is_zero() || x.num() == x.den()) return dist;
  const IdentifiedDegreeMultiset ms = identify_boundary(build(x, max_q));
  for (const auto& [k, m] : ms.counts) dist.set(k, Rational(BigInt(m), x.den()));
  return dist;
}

}  // namespace haros
