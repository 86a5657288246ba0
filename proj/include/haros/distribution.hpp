#pragma once

/**
 * @file distribution.hpp
 * @brief Exact degree distribution P(k, x) shared by every evaluation route.
 */

#include "haros/exact_arith.hpp"

#include <cstdint>
#include <map>
#include <ostream>

namespace haros {

/// Degree k -> probability. Only strictly positive entries are stored, so two
/// distributions compare equal iff they agree at every degree.
struct DegreeDistribution {
  std::map<std::uint64_t, Rational> entries;
  BigInt denominator{1};  // q of the labelling fraction p/q

  Rational at(std::uint64_t k) const {
    auto it = entries.find(k);
    return it == entries.end() ? Rational() : it->second;
  }

  /// Stores p unless it is zero.
  void set(std::uint64_t k, Rational p) {
    if (p.is_zero()) {
      entries.erase(k);
    } else {
      entries.insert_or_assign(k, std::move(p));
    }
  }

  bool empty() const { return entries.empty(); }

  Rational total() const {
    Rational s;
    for (const auto& [k, p] : entries) s += p;
    return s;
  }

  Rational mean_degree() const {
    Rational s;
    for (const auto& [k, p] : entries) s += Rational(BigInt(k), BigInt(1)) * p;
    return s;
  }

  std::uint64_t max_degree() const { return entries.empty() ? 0 : entries.rbegin()->first; }

  friend bool operator==(const DegreeDistribution& a, const DegreeDistribution& b) {
    return a.entries == b.entries;
  }
};

inline std::ostream& operator<<(std::ostream& os, const DegreeDistribution& d) {
  os << '{';
  bool first = true;
  for (const auto& [k, p] : d.entries) {
    os << (first ? "" : ", ") << k << ':' << p;
    first = false;
  }
  return os << '}';
}

}  // namespace haros
