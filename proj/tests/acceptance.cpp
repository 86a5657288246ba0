// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// All probability comparisons are exact rational equality (tolerance 0).
// Each criterion also has a wall-clock budget; going over it is a failure.

#include "haros/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace haros;

namespace {

Rational R(std::int64_t p, std::int64_t q) { return Rational(BigInt(p), BigInt(q)); }

bool interior(const Rational& x) { return !x.is_zero() && x != Rational(1); }
Rational fold(const Rational& x) { return x > R(1, 2) ? Rational(1) - x : x; }

// Collects the first failure message; later failures only bump the count.
struct Outcome {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::string first;

  void check(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (!failures++) first = what();
  }
};

template <typename T>
std::string show(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Emergent count: nodes of degree k excluding the identified boundary node.
std::uint64_t count_at(const IdentifiedDegreeMultiset& ms, std::uint64_t k) {
  auto it = ms.counts.find(k);
  const std::uint64_t n = it == ms.counts.end() ? 0 : it->second;
  return k == ms.boundary_degree ? n - 1 : n;
}

// ---------------------------------------------------------------------------

Outcome ten_over_twenty_three() {
  Outcome o;
  const Rational x = R(10, 23);
  const std::map<std::uint64_t, Rational> expected{
      {2, R(10, 23)}, {3, R(3, 23)}, {5, R(7, 23)}, {8, R(2, 23)}, {10, R(1, 23)}};
  o.check(thm1_distribution(x).entries == expected, [&] { return "thm1 gives " + show(thm1_distribution(x)); });
  o.check(thm2_distribution(x).entries == expected, [&] { return "thm2 gives " + show(thm2_distribution(x)); });
  o.check(degree_distribution_oracle(x).entries == expected,
          [&] { return "oracle gives " + show(degree_distribution_oracle(x)); });

  std::ostringstream out, err;
  const int code = cli::cmd_dist(cli::DistArgs{.fraction = "10/23", .method = "all", .strict = true}, out, err);
  const std::string table =
      "k,thm1,thm2,oracle,match\n2,10/23,10/23,10/23,yes\n3,3/23,3/23,3/23,yes\n5,7/23,7/23,7/23,yes\n"
      "8,2/23,2/23,2/23,yes\n10,1/23,1/23,1/23,yes\n";
  o.check(code == 0 && out.str().find(table) != std::string::npos, [&] { return "dist printed:\n" + out.str(); });

  const std::vector<std::uint64_t> expected_sequence{3, 2, 5, 2, 5, 2, 8, 3, 2, 5, 2, 5, 2, 8, 3, 2, 5, 2, 5, 2, 5, 2, 10};
  const HarosGraph g = build(x);
  std::vector<std::uint64_t> seq = identified_sequence(g);
  o.check(seq == expected_sequence, [&] { return "identified sequence differs from the expected 23-entry sequence"; });
  std::map<std::uint64_t, std::uint64_t> expected_counts;
  for (auto d : expected_sequence) ++expected_counts[d];
  o.check(identify_boundary(g).counts == expected_counts, [] { return "identified multiset differs"; });
  return o;
}

Outcome triple_equality_f200() {
  Outcome o;
  for (const Rational& x : farey_sequence(200)) {
    const DegreeDistribution by_cf = thm1_distribution(x);
    const DegreeDistribution by_graph = degree_distribution_oracle(x);
    o.check(by_cf == by_graph, [&] { return "x=" + x.str() + ": thm1 " + show(by_cf) + " vs oracle " + show(by_graph); });
    if (!interior(x)) continue;
    // Beyond degree level(x) + 2 both sides are zero; check a few past it anyway.
    const std::uint64_t last = to_u64(tree_level_of(x)) + 6;
    for (std::uint64_t k = 5; k <= last; ++k) {
      const Rational p = thm2_eval(k, x);
      o.check(p == by_cf.at(k), [&] {
        return "x=" + x.str() + ", k=" + std::to_string(k) + ": thm2 " + p.str() + " vs thm1 " + by_cf.at(k).str();
      });
    }
  }
  return o;
}

Outcome worked_k5_line() {
  Outcome o;
  for (int i = 1; i <= 20; ++i) {
    const Rational lo = R(1, 3) + R(1, 6) * R(i, 21);
    const Rational hi = R(1, 2) + R(1, 6) * R(i, 21);
    o.check(thm2_eval(5, lo) == Rational(3) * lo - Rational(1), [&] { return "3x-1 fails at " + lo.str(); });
    o.check(thm2_eval(5, hi) == Rational(2) - Rational(3) * hi, [&] { return "-3x+2 fails at " + hi.str(); });
  }
  for (const auto& [x, v] : std::vector<std::pair<Rational, Rational>>{{R(1, 2), Rational()}, {R(1, 3), R(1, 3)}, {R(2, 3), R(1, 3)}}) {
    o.check(thm2_eval(5, x) == v, [&] { return "thm2 P(5, " + x.str() + ") = " + thm2_eval(5, x).str(); });
    o.check(thm1_distribution(x).at(5) == v, [&] { return "thm1 P(5, " + x.str() + ") = " + thm1_distribution(x).at(5).str(); });
    o.check(degree_distribution_oracle(x).at(5) == v, [&] { return "oracle P(5, " + x.str() + ") wrong"; });
  }
  return o;
}

Outcome continuant_identities() {
  Outcome o;
  auto check_list = [&](const std::vector<BigInt>& xs) {
    const std::span<const BigInt> s(xs);
    const std::size_t n = xs.size();
    const BigInt whole = continuant(s);
    for (std::size_t m = 1; m < n; ++m) {
      const BigInt split = continuant(s.first(m)) * continuant(s.subspan(m)) +
                           continuant(s.first(m - 1)) * continuant(s.subspan(m + 1));
      o.check(split == whole, [&] { return "splitting fails for a list of length " + std::to_string(n); });
    }
    const BigInt det = whole * continuant(s.subspan(1, n - 2)) - continuant(s.first(n - 1)) * continuant(s.subspan(1));
    o.check(det == (n % 2 == 0 ? 1 : -1), [&] { return "determinant identity gives " + det.str(); });
  };

  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<BigInt> xs(n, BigInt(1));
    while (true) {
      check_list(xs);
      std::size_t i = 0;
      while (i < n && xs[i] == 5) xs[i++] = 1;
      if (i == n) break;
      xs[i] += 1;
    }
  }
  std::mt19937_64 rng(1729);
  std::uniform_int_distribution<std::size_t> len(2, 10);
  std::uniform_int_distribution<int> term(1, 1000);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<BigInt> xs(len(rng));
    for (auto& v : xs) v = term(rng);
    check_list(xs);
  }
  return o;
}

// s^(l,t) = K(a_{l+1} - 1, a_{l+2}, ..., a_t), extended to t = l - 1 by the
// three-term recurrence, which forces s^(l,l-1) = -1.
BigInt s_shift(const std::vector<BigInt>& a, std::size_t l, std::size_t t) {
  if (t + 1 == l) return BigInt(-1);
  std::vector<BigInt> xs(a.begin() + static_cast<std::ptrdiff_t>(l), a.begin() + static_cast<std::ptrdiff_t>(t));
  if (!xs.empty()) xs.front() -= 1;
  return continuant(xs);
}

Outcome descendant_recurrences() {
  Outcome o;
  for (std::int64_t level = 3; level <= 12; ++level) {
    for (const Rational& x : tree_level(level).fractions) {
      // The recurrences are stated on (0, 1/2); a node above 1/2 is checked
      // through the mirror image of its children, which have mirrored graphs.
      const bool mirrored = x > R(1, 2);
      const Rational y = fold(x);
      const ContinuedFraction cf = cf_expand(y);
      const std::vector<BigInt> a(cf.terms().begin(), cf.terms().end());
      const std::size_t m = a.size();

      std::vector<BigInt> cont = a, turn = a, ab_terms = a;
      cont.back() += 1;
      turn.back() -= 1;
      turn.push_back(BigInt(2));
      ab_terms.back() -= 1;
      auto unfold = [&](const Rational& v) { return mirrored ? Rational(1) - v : v; };
      const Rational cont_child = unfold(cf_value(ContinuedFraction(cont)));
      const Rational turn_child = unfold(cf_value(ContinuedFraction(turn)));
      const Rational ab = unfold(Rational(continuant(std::span<const BigInt>(ab_terms).subspan(1)), continuant(ab_terms)));

      const auto [lower, upper] = tree_children(x);
      o.check((lower == cont_child && upper == turn_child) || (lower == turn_child && upper == cont_child),
              [&] { return "children of " + x.str() + " do not match the descendant continued fractions"; });

      const auto ms_x = identify_boundary(build(x));
      const auto ms_cont = identify_boundary(build(cont_child));
      const auto ms_turn = identify_boundary(build(turn_child));
      const auto ms_ab = identify_boundary(build(ab));
      std::optional<IdentifiedDegreeMultiset> ms_conv;
      if (m >= 2) ms_conv = identify_boundary(build(unfold(convergents(cf)[m - 2])));

      std::uint64_t k = 3;
      for (std::size_t l = 1; l < m; ++l) {
        k += to_u64(a[l - 1]);
        auto where = [&](const char* eq) {
          return std::string(eq) + " fails at x=" + x.str() + ", l=" + std::to_string(l) + ", k=" + std::to_string(k);
        };
        const BigInt c_cont(count_at(ms_cont, k));
        const BigInt eq4 = s_shift(a, l, m - 2) + (a[m - 1] + 1) * s_shift(a, l, m - 1);
        o.check(c_cont == eq4, [&] { return where("continuing-descent closed form"); });
        const std::uint64_t via_concat = count_at(ms_x, k) + (ms_conv ? count_at(*ms_conv, k) : 0) + (l + 1 == m ? 1 : 0);
        o.check(count_at(ms_cont, k) == via_concat, [&] { return where("continuing-descent recurrence"); });

        const BigInt c_turn(count_at(ms_turn, k));
        const BigInt eq7 = 2 * s_shift(ab_terms, l, m) + s_shift(ab_terms, l, m - 1);
        o.check(c_turn == eq7, [&] { return where("turning-descent closed form"); });
        o.check(count_at(ms_turn, k) == count_at(ms_x, k) + count_at(ms_ab, k),
                [&] { return where("turning-descent recurrence"); });
      }
    }
  }
  return o;
}

Outcome piecewise_f500() {
  Outcome o;
  std::vector<Rational> xs = farey_sequence(500);
  std::vector<std::uint64_t> level(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) level[i] = to_u64(tree_level_of(xs[i]));

  for (std::uint64_t k = 5; k <= 8; ++k) {
    const std::string ks = "k=" + std::to_string(k) + ": ";
    std::vector<std::size_t> breaks;  // indices of fractions with level <= k - 2
    std::vector<Rational> value(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (level[i] <= k - 2) breaks.push_back(i);
      if (interior(xs[i])) value[i] = thm2_eval(k, xs[i]);
    }
    // Between consecutive breakpoints the function must be one exact line; a
    // pivot (level k - 3) sits between two level-(k - 2) neighbours.
    struct Line {
      Rational slope, intercept;
      Rational at(const Rational& x) const { return slope * x + intercept; }
    };
    std::vector<std::optional<Line>> lines(breaks.size() - 1);
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const std::size_t from = breaks[b] + 1, to = breaks[b + 1];
      if (to - from < 2) continue;
      const Rational& x0 = xs[from];
      const Rational& x1 = xs[from + 1];
      Line line{(value[from + 1] - value[from]) / (x1 - x0), Rational()};
      line.intercept = value[from] - line.slope * x0;
      for (std::size_t i = from + 2; i < to; ++i) {
        o.check(line.at(xs[i]) == value[i], [&] { return ks + "sample " + xs[i].str() + " is off its subinterval line"; });
      }
      lines[b] = line;
    }
    // Continuity of the envelope at every breakpoint: adjacent lines agree there,
    // and they are positive at pivots and zero at the other breakpoints.
    for (std::size_t b = 1; b + 1 < breaks.size(); ++b) {
      if (!lines[b - 1] || !lines[b]) continue;
      const Rational& x = xs[breaks[b]];
      const Rational left = lines[b - 1]->at(x);
      const Rational right = lines[b]->at(x);
      o.check(left == right, [&] { return ks + "pieces disagree at " + x.str() + ": " + left.str() + " vs " + right.str(); });
      if (level[breaks[b]] == k - 3) {
        o.check(left.sign() > 0, [&] { return ks + "pivot " + x.str() + " has non-positive peak"; });
      } else {
        o.check(left.is_zero(), [&] { return ks + "envelope does not vanish at " + x.str(); });
      }
    }
  }
  return o;
}

Outcome base_cases_f300() {
  Outcome o;
  for (const Rational& x : farey_sequence(300)) {
    if (!interior(x)) {
      for (int k = 2; k <= 4; ++k) {
        o.check(base_case(k, x).is_zero() && thm1_distribution(x).empty(),
                [&] { return "endpoint " + x.str() + " is not the zero distribution"; });
      }
      continue;
    }
    const bool low = x <= R(1, 2);
    const Rational p2 = low ? x : Rational(1) - x;
    const Rational p3 = low ? Rational(1) - Rational(2) * x : Rational(2) * x - Rational(1);
    const Rational p4 = x == R(1, 2) ? R(1, 2) : Rational();
    o.check(base_case(2, x) == p2 && base_case(3, x) == p3 && base_case(4, x).is_zero(),
            [&] { return "base_case formulas fail at " + x.str(); });
    for (const auto& [name, d] : std::vector<std::pair<const char*, DegreeDistribution>>{
             {"thm1", thm1_distribution(x)}, {"thm2", thm2_distribution(x)}, {"oracle", degree_distribution_oracle(x)}}) {
      o.check(d.at(2) == p2 && d.at(3) == p3 && d.at(4) == p4,
              [&] { return std::string(name) + " distribution at " + x.str() + " is " + show(d); });
    }
  }
  return o;
}

Outcome conservation_f300() {
  Outcome o;
  for (const Rational& x : farey_sequence(300)) {
    const HarosGraph g = build(x);
    const std::uint64_t q = to_u64(x.den());
    o.check(g.node_count() == q + 1 && g.edge_count() == 2 * q - 1, [&] { return "graph size wrong for " + x.str(); });
    if (!interior(x)) continue;
    const Rational mean(BigInt(4 * q - 2), BigInt(q));
    for (const auto& d : {thm1_distribution(x), degree_distribution_oracle(x)}) {
      o.check(d.total() == Rational(1), [&] { return "sum of P(k, " + x.str() + ") is " + d.total().str(); });
      o.check(d.mean_degree() == mean, [&] { return "mean degree at " + x.str() + " is " + d.mean_degree().str(); });
    }
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome sweep_f1000() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("haros_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string bodies[2];
  for (int run = 0; run < 2; ++run) {
    cli::SweepArgs args;
    args.k_set = {5, 6, 7, 8};
    args.order = 1000;
    args.out_path = (dir / ("sweep_" + std::to_string(run) + ".csv")).string();
    std::ostringstream out, err;
    const int code = cli::cmd_sweep(args, out, err);
    o.check(code == 0, [&] { return "sweep exited " + std::to_string(code) + ": " + err.str(); });
    bodies[run] = slurp(args.out_path);
  }
  fs::remove_all(dir);
  o.check(bodies[0] == bodies[1], [] { return "two sweeps produced different bytes"; });

  std::istringstream in(bodies[0]);
  std::string line;
  std::getline(in, line);
  o.check(line == kSweepCsvHeader, [&] { return "unexpected header " + line; });
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> f;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) f.push_back(c);
    o.check(f.size() == 10 && f[4] == f[6] && f[5] == f[7] && f[4] == f[8] && f[5] == f[9],
            [&] { return "columns disagree: " + line; });
  }
  const std::uint64_t interior_points = farey_sequence(1000).size() - 2;
  o.check(rows == 4 * interior_points, [&] { return "row count " + std::to_string(rows); });
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"distribution and degree sequence of 10/23", 1, ten_over_twenty_three},
      {"triple equality over F_200", 60, triple_equality_f200},
      {"worked k=5 line", 1, worked_k5_line},
      {"continuant splitting and determinant identities", 10, continuant_identities},
      {"descendant recurrences on levels 3-12", 30, descendant_recurrences},
      {"piecewise linearity and continuity over F_500", 60, piecewise_f500},
      {"base cases over F_300", 60, base_cases_f300},
      {"conservation over F_300", 60, conservation_f300},
      {"sweep k=5..8 over F_1000", 600, sweep_f1000},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.failures = 1;
      o.first = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool ok = o.failures == 0 && in_time;
    if (!ok) ++failed;
    std::printf("%s %d %s: %llu checks, %.2f s (budget %.0f s)", ok ? "PASS" : "FAIL", index, c.name,
                static_cast<unsigned long long>(o.checks), secs, c.budget_s);
    if (o.failures) std::printf("; %llu failed, first: %s", static_cast<unsigned long long>(o.failures), o.first.c_str());
    if (!in_time) std::printf("; over budget");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
