#pragma once

/**
 * @file commands.hpp
 * @brief Implementations of the `haros` subcommands (cf, build, dist, sweep,
 * verify). Each takes parsed options plus output/error streams and returns the
 * process exit code, so the commands can be driven directly from tests.
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
 * 3 resource cap, 4 strict-mode mismatch.
 */

#include "haros/degree_dist.hpp"
#include "haros/haros_graph.hpp"
#include "haros/sweep.hpp"
#include "haros/verify.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace haros::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kResourceCap = 3,
  kStrictMismatch = 4,
};

inline constexpr std::uint64_t kDefaultMaxQ = 1'000'000;
inline constexpr std::uint64_t kDefaultMaxRows = 5'000'000;
inline constexpr std::int64_t kMaxVerifyOrder = 5000;
inline constexpr std::int64_t kMaxVerifyLevels = 20;

/// Oracle cap: explicit flag, else HAROS_MAX_Q, else the default. Never above
/// the builder's hard limit.
inline std::uint64_t resolve_max_q(std::optional<std::uint64_t> flag) {
  std::uint64_t cap = kDefaultMaxQ;
  if (flag) {
    cap = *flag;
  } else if (const char* env = std::getenv("HAROS_MAX_Q")) {
    try {
      cap = std::stoull(env);
    } catch (const std::exception&) {
      // keep the default on garbage
    }
  }
  return std::min(cap, kMaxBuildDenominator);
}

/// Parses a "p/q" literal in [0, 1]. Reports errors and normalization notices on err.
inline std::optional<Rational> parse_fraction_arg(const std::string& text, std::ostream& err) {
  Rational x;
  try {
    x = Rational::parse(text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  if (x.sign() < 0 || x.num() > x.den()) {
    err << "error: fraction '" << text << "' is outside [0, 1]\n";
    return std::nullopt;
  }
  if (x.str() != text) err << "note: " << text << " normalized to " << x << '\n';
  return x;
}

namespace detail {

inline nlohmann::ordered_json integer_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline const char* endpoint_note(const Rational& x) {
  return x.is_zero() ? "P(k,0)=0 by convention" : "P(k,1)=0 by convention";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// cf

struct CfArgs {
  std::string fraction;
  bool json = false;
};

inline int cmd_cf(const CfArgs& args, std::ostream& out, std::ostream& err) {
  const auto parsed = parse_fraction_arg(args.fraction, err);
  if (!parsed) return kUsageError;
  const Rational& x = *parsed;

  std::vector<BigInt> terms;
  std::vector<Rational> conv;
  SymbolicPath path;
  if (!x.is_zero()) {
    const ContinuedFraction cf = cf_expand(x);
    terms.assign(cf.terms().begin(), cf.terms().end());
    conv = convergents(cf);
    if (x.num() != x.den()) path = symbolic_path(x);
  }
  const BigInt level = tree_level_of(x);
  constexpr std::size_t kMaxWord = 4096;
  const std::optional<std::string> word =
      path.length() <= kMaxWord ? std::optional<std::string>(path.word()) : std::nullopt;

  if (args.json) {
    nlohmann::ordered_json j;
    j["x"] = x.str();
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& a : terms) j["terms"].push_back(detail::integer_json(a));
    j["convergents"] = nlohmann::ordered_json::array();
    for (const auto& c : conv) j["convergents"].push_back(c.str());
    j["path"] = word ? nlohmann::ordered_json(*word) : nlohmann::ordered_json(nullptr);
    j["path_runs"] = path.compact();
    j["level"] = detail::integer_json(level);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "x: " << x << '\n';
  out << "terms: " << haros::detail::join(terms) << '\n';
  out << "convergents: " << haros::detail::join(conv) << '\n';
  out << "path: " << (word ? *word : std::string("(too long; see path_runs)")) << '\n';
  out << "path_runs: " << path.compact() << '\n';
  out << "level: " << level << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  std::string fraction;
  std::string format = "csv";  // csv | json
  std::optional<std::uint64_t> max_q{};
};

inline int cmd_build(const BuildArgs& args, std::ostream& out, std::ostream& err) {
  const auto parsed = parse_fraction_arg(args.fraction, err);
  if (!parsed) return kUsageError;
  const Rational& x = *parsed;

  HarosGraph g;
  try {
    g = build(x, resolve_max_q(args.max_q));
  } catch (const resource_limit_error& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  }
  const bool endpoint = g.degrees.size() < 3;
  IdentifiedDegreeMultiset ms;
  if (!endpoint) ms = identify_boundary(g);

  if (args.format == "json") {
    nlohmann::ordered_json j;
    j["x"] = x.str();
    j["nodes"] = g.node_count();
    j["edges"] = g.edge_count();
    j["degrees"] = g.degrees;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [k, m] : ms.counts) counts[std::to_string(k)] = m;
    j["identified"] = counts;
    j["identified_total"] = ms.total;
    if (endpoint) {
      j["boundary_degree"] = nullptr;
      j["note"] = detail::endpoint_note(x);
    } else {
      j["boundary_degree"] = ms.boundary_degree;
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "# x=" << x << " nodes=" << g.node_count() << " edges=" << g.edge_count();
  if (!endpoint) out << " boundary_degree=" << ms.boundary_degree;
  out << '\n';
  if (endpoint) out << "# note: " << detail::endpoint_note(x) << '\n';
  out << "node,degree\n";
  for (std::size_t i = 0; i < g.degrees.size(); ++i) out << i << ',' << g.degrees[i] << '\n';
  out << '\n' << "degree,count\n";
  for (const auto& [k, m] : ms.counts) out << k << ',' << m << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
  std::string fraction;
  std::string method = "thm1";  // thm1 | thm2 | oracle | all
  bool strict = false;
  bool json = false;
  std::optional<std::uint64_t> max_q{};
};

inline int cmd_dist(const DistArgs& args, std::ostream& out, std::ostream& err) {
  const auto parsed = parse_fraction_arg(args.fraction, err);
  if (!parsed) return kUsageError;
  const Rational& x = *parsed;
  const bool all = args.method == "all";

  std::map<std::string, DegreeDistribution> columns;
  try {
    if (all || args.method == "thm1") columns["thm1"] = thm1_distribution(x);
    if (all || args.method == "thm2") columns["thm2"] = thm2_distribution(x);
    if (all || args.method == "oracle") columns["oracle"] = degree_distribution_oracle(x, resolve_max_q(args.max_q));
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  }
  if (columns.empty()) {
    err << "error: unknown method '" << args.method << "'\n";
    return kUsageError;
  }
  const std::vector<std::string> order = all ? std::vector<std::string>{"thm1", "thm2", "oracle"}
                                             : std::vector<std::string>{args.method};
  std::set<std::uint64_t> degrees;
  for (const auto& [name, d] : columns) {
    for (const auto& [k, p] : d.entries) degrees.insert(k);
  }
  bool mismatch = false;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream table;
  table << 'k';
  for (const auto& name : order) table << ',' << name;
  if (all) table << ",match";
  table << '\n';
  for (std::uint64_t k : degrees) {
    nlohmann::ordered_json row;
    row["k"] = k;
    table << k;
    bool match = true;
    for (const auto& name : order) {
      const Rational p = columns[name].at(k);
      match = match && p == columns[order.front()].at(k);
      row[name] = p.str();
      table << ',' << p;
    }
    if (all) {
      row["match"] = match;
      table << ',' << (match ? "yes" : "NO");
    }
    mismatch = mismatch || !match;
    table << '\n';
    rows.push_back(std::move(row));
  }

  const bool endpoint = x.is_zero() || x.num() == x.den();
  if (args.json) {
    nlohmann::ordered_json j;
    j["x"] = x.str();
    j["method"] = args.method;
    j["rows"] = rows;
    if (all) j["all_match"] = !mismatch;
    if (endpoint) j["note"] = detail::endpoint_note(x);
    out << j.dump(2) << '\n';
  } else {
    out << "# x=" << x << " method=" << args.method << '\n';
    if (endpoint) out << "# note: " << detail::endpoint_note(x) << '\n';
    out << table.str();
  }
  if (mismatch) {
    err << "warning: distribution routes disagree for " << x << '\n';
    if (args.strict) return kStrictMismatch;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::vector<std::uint64_t> k_set{5, 6, 7, 8};
  std::int64_t order = 0;
  std::string out_path;      // empty or "-": standard output
  std::string format = "csv";  // csv | json
  unsigned threads = 0;
  std::uint64_t max_rows = kDefaultMaxRows;
  std::optional<std::uint64_t> max_q{};
  bool strict = false;
};

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  if (args.order < 1) {
    err << "error: --order must be >= 1\n";
    return kUsageError;
  }
  if (args.k_set.empty()) {
    err << "error: --k needs at least one degree\n";
    return kUsageError;
  }
  for (auto k : args.k_set) {
    if (k < 5) {
      err << "error: --k entries must be >= 5, got " << k << '\n';
      return kUsageError;
    }
  }
  if (args.format != "csv" && args.format != "json") {
    err << "error: unknown format '" << args.format << "'\n";
    return kUsageError;
  }

  std::vector<SweepRow> table;
  try {
    table = sweep(args.k_set, args.order, SweepOptions{args.max_rows, resolve_max_q(args.max_q), args.threads});
  } catch (const resource_limit_error& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  }
  const SweepSummary summary = summarize(table);

  auto emit = [&](std::ostream& os) {
    if (args.format == "json") {
      os << sweep_to_json(table).dump() << '\n';
    } else {
      write_sweep_csv(os, table);
    }
  };

  const bool to_stdout = args.out_path.empty() || args.out_path == "-";
  if (to_stdout) {
    emit(out);
  } else {
    namespace fs = std::filesystem;
    const fs::path target(args.out_path);
    const fs::path partial = fs::path(args.out_path + ".partial");
    try {
      {
        std::ofstream file(partial, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open " + partial.string() + " for writing");
        emit(file);
        file.flush();
        if (!file) throw std::runtime_error("write to " + partial.string() + " failed");
      }
      fs::rename(partial, target);
    } catch (const std::exception& e) {
      std::error_code ec;
      fs::remove(partial, ec);
      err << "error: " << e.what() << '\n';
      return kResourceCap;
    }
  }
  std::ostream& report = to_stdout ? err : out;
  report << "sweep: rows=" << summary.rows << " removable_points=" << summary.removable_points
         << " mismatched_rows=" << summary.mismatched_rows << " max_discrepancy=" << summary.max_discrepancy << '\n';
  if (summary.mismatched_rows && args.strict) return kStrictMismatch;
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::int64_t order = 50;
  std::int64_t levels = 10;
  std::string suite = "all";  // all | identities | recurrences | triple | corollary
  unsigned threads = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string started;
  std::string finished;
  std::uint64_t checks_passed = 0;
  std::uint64_t checks_failed = 0;
  std::optional<std::string> first_failure;
  nlohmann::ordered_json suites = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["started"] = started;
    j["finished"] = finished;
    j["checks_passed"] = checks_passed;
    j["checks_failed"] = checks_failed;
    if (first_failure) j["first_failure"] = *first_failure;
    j["suites"] = suites;
    return j;
  }
};

inline int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  static const std::set<std::string> kSuites{"all", "identities", "recurrences", "triple", "corollary"};
  if (args.order < 1 || args.levels < 3 || !kSuites.count(args.suite)) {
    err << "error: verify needs --order >= 1, --levels >= 3 and a known --suite\n";
    return kUsageError;
  }
  if (args.order > kMaxVerifyOrder || args.levels > kMaxVerifyLevels) {
    err << "error: verify caps are --order <= " << kMaxVerifyOrder << " and --levels <= " << kMaxVerifyLevels << '\n';
    return kResourceCap;
  }

  RunManifest manifest;
  manifest.command = "verify";
  manifest.parameters["order"] = std::to_string(args.order);
  manifest.parameters["levels"] = std::to_string(args.levels);
  manifest.parameters["suite"] = args.suite;
  manifest.started = detail::utc_timestamp();

  CheckTally total;
  auto run = [&](const std::string& name, auto&& suite_fn) {
    if (args.suite != "all" && args.suite != name) return;
    const CheckTally t = suite_fn();
    manifest.suites[name] = {{"passed", t.passed}, {"failed", t.failed}};
    total.merge(t);
  };
  run("identities", [&] {
    CheckTally t = check_continuant_identities(2, 6, 4);
    t.merge(check_cf_and_paths(args.order));
    return t;
  });
  run("recurrences", [&] { return check_descendant_recurrences(3, args.levels); });
  run("triple", [&] { return check_triple_equality(args.order, args.threads); });
  run("corollary", [&] { return check_piecewise_linearity({5, 6, 7, 8}, args.order); });

  manifest.finished = detail::utc_timestamp();
  manifest.checks_passed = total.passed;
  manifest.checks_failed = total.failed;
  manifest.first_failure = total.first_failure;
  out << manifest.to_json().dump(2) << '\n';
  if (total.failed) {
    err << "verification failed: " << *total.first_failure << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

}  // namespace haros::cli
