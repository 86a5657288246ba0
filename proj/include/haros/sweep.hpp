#pragma once

/**
 * @file sweep.hpp
 * @brief P(k, x) over a Farey sequence, evaluated by three independent routes
 * (continued-fraction form, interval form, explicit graph), plus CSV and JSON
 * serialization of the resulting table.
 */

#include "haros/degree_dist.hpp"
#include "haros/haros_graph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace haros {

struct SweepRow {
  Rational x;
  std::uint64_t k = 0;
  Rational thm1;
  Rational thm2;
  Rational oracle;
  bool removable = false;  // x is a fraction of level <= k - 2 (a removable discontinuity)
};

struct SweepOptions {
  std::uint64_t row_cap = 5'000'000;
  std::uint64_t max_q = 1'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepSummary {
  std::uint64_t rows = 0;
  std::uint64_t removable_points = 0;
  std::uint64_t mismatched_rows = 0;
  Rational max_discrepancy;
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(i) for i in [0, jobs) on `threads` workers with interleaved indices.
template <typename Fn>
void parallel_for(std::size_t jobs, unsigned threads, Fn&& fn) {
  const unsigned n = worker_count(threads, jobs);
  if (n <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < jobs; i += n) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return d.sign() < 0 ? -d : d;
}

}  // namespace detail

/**
 * One row per (x, k) with x in F_n strictly inside (0, 1) and k in k_set,
 * sorted by x then k. Each fraction is handled by one worker; rows are written
 * into preassigned slots so the output never depends on scheduling.
 */
inline std::vector<SweepRow> sweep(std::vector<std::uint64_t> k_set, std::int64_t order,
                                   const SweepOptions& opts = {}) {
  if (order < 1) throw std::invalid_argument("sweep order must be >= 1");
  for (auto k : k_set) {
    if (k < 5) throw std::invalid_argument("sweep degrees must be >= 5, got " + std::to_string(k));
  }
  std::sort(k_set.begin(), k_set.end());
  k_set.erase(std::unique(k_set.begin(), k_set.end()), k_set.end());

  std::vector<Rational> fractions = farey_sequence(order);
  fractions.erase(fractions.begin());
  fractions.pop_back();

  const std::uint64_t rows = fractions.size() * k_set.size();
  if (rows > opts.row_cap) {
    throw resource_limit_error("sweep needs " + std::to_string(rows) + " rows; cap is " +
                               std::to_string(opts.row_cap));
  }
  if (order > 0 && static_cast<std::uint64_t>(order) > opts.max_q) {
    throw resource_limit_error("sweep order " + std::to_string(order) + " exceeds oracle cap " +
                               std::to_string(opts.max_q));
  }

  std::vector<SweepRow> table(rows);
  detail::parallel_for(fractions.size(), opts.threads, [&](std::size_t i) {
    const Rational& x = fractions[i];
    const DegreeDistribution by_cf = thm1_distribution(x);
    const DegreeDistribution by_graph = degree_distribution_oracle(x, opts.max_q);
    const BigInt level = tree_level_of(x);
    for (std::size_t j = 0; j < k_set.size(); ++j) {
      const std::uint64_t k = k_set[j];
      SweepRow& row = table[i * k_set.size() + j];
      row.x = x;
      row.k = k;
      row.thm1 = by_cf.at(k);
      row.thm2 = thm2_eval(k, x);
      row.oracle = by_graph.at(k);
      row.removable = level + 2 <= BigInt(k);
    }
  });
  return table;
}

inline SweepSummary summarize(const std::vector<SweepRow>& table) {
  SweepSummary s;
  s.rows = table.size();
  for (const auto& r : table) {
    if (r.removable) ++s.removable_points;
    const Rational d = std::max({detail::abs_diff(r.thm1, r.thm2), detail::abs_diff(r.thm1, r.oracle),
                                 detail::abs_diff(r.thm2, r.oracle)});
    if (!d.is_zero()) ++s.mismatched_rows;
    if (d > s.max_discrepancy) s.max_discrepancy = d;
  }
  return s;
}

inline constexpr const char* kSweepCsvHeader =
    "x_num,x_den,x_float,k,p_thm1_num,p_thm1_den,p_thm2_num,p_thm2_den,p_oracle_num,p_oracle_den";

/// Locale-independent shortest-unambiguous rendering with 17 significant digits.
inline std::string format_float17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& table) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : table) {
    os << r.x.num() << ',' << r.x.den() << ',' << format_float17(r.x.to_double()) << ',' << r.k << ','
       << r.thm1.num() << ',' << r.thm1.den() << ',' << r.thm2.num() << ',' << r.thm2.den() << ','
       << r.oracle.num() << ',' << r.oracle.den() << '\n';
  }
}

/// JSON array mirroring the CSV column names. Integers are emitted as decimal
/// strings when they exceed 64 bits.
inline nlohmann::ordered_json sweep_to_json(const std::vector<SweepRow>& table) {
  auto integer = [](const BigInt& v) -> nlohmann::ordered_json {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
    return v.str();
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    nlohmann::ordered_json j;
    j["x_num"] = integer(r.x.num());
    j["x_den"] = integer(r.x.den());
    j["x_float"] = r.x.to_double();
    j["k"] = r.k;
    j["p_thm1_num"] = integer(r.thm1.num());
    j["p_thm1_den"] = integer(r.thm1.den());
    j["p_thm2_num"] = integer(r.thm2.num());
    j["p_thm2_den"] = integer(r.thm2.den());
    j["p_oracle_num"] = integer(r.oracle.num());
    j["p_oracle_den"] = integer(r.oracle.den());
    rows.push_back(std::move(j));
  }
  return rows;
}

}  // namespace haros
