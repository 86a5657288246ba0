// haros: command-line front end for Haros-graph degree distributions.
//
//   haros cf 10/23
//   haros build 10/23 --format json
//   haros dist 10/23 --method all --strict
//   haros sweep --k 5,6,7,8 --order 1000 --out fig3.csv
//   haros verify --order 50 --levels 10 --suite all

#include "haros/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  using namespace haros::cli;

  CLI::App app{"Haros graphs: construction, exact degree distributions and cross-checks"};
  app.require_subcommand(1);

  CfArgs cf_args;
  auto* cf = app.add_subcommand("cf", "Continued fraction, convergents, tree path and level of p/q");
  cf->add_option("fraction", cf_args.fraction, "Fraction p/q in [0,1]")->required();
  cf->add_flag("--json", cf_args.json, "Emit JSON");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Build G_{p/q}: degree sequence and boundary-identified multiset");
  build->add_option("fraction", build_args.fraction, "Fraction p/q in [0,1]")->required();
  build->add_option("--format", build_args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  build->add_option("--max-q", build_args.max_q, "Denominator cap (default: $HAROS_MAX_Q or 1000000)");

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "Degree distribution P(k, p/q)");
  dist->add_option("fraction", dist_args.fraction, "Fraction p/q in [0,1]")->required();
  dist->add_option("--method", dist_args.method, "Evaluation route")
      ->check(CLI::IsMember({"thm1", "thm2", "oracle", "all"}))
      ->capture_default_str();
  dist->add_flag("--strict", dist_args.strict, "Exit 4 when routes disagree (with --method all)");
  dist->add_flag("--json", dist_args.json, "Emit JSON");
  dist->add_option("--max-q", dist_args.max_q, "Oracle denominator cap (default: $HAROS_MAX_Q or 1000000)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Tabulate P(k, x) for x in F_n by all three routes");
  sweep->add_option("--k", sweep_args.k_set, "Degrees (each >= 5), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--order", sweep_args.order, "Farey order n")->required();
  sweep->add_option("--out", sweep_args.out_path, "Output file (default: standard output)");
  sweep->add_option("--format", sweep_args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (0: all cores)")->capture_default_str();
  sweep->add_option("--max-rows", sweep_args.max_rows, "Row cap")->capture_default_str();
  sweep->add_option("--max-q", sweep_args.max_q, "Oracle denominator cap (default: $HAROS_MAX_Q or 1000000)");
  sweep->add_flag("--strict", sweep_args.strict, "Exit 4 when any row's routes disagree");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the identity and cross-method check suites");
  verify->add_option("--order", verify_args.order, "Farey order n")->capture_default_str();
  verify->add_option("--levels", verify_args.levels, "Deepest tree level for the recurrence checks")
      ->capture_default_str();
  verify->add_option("--suite", verify_args.suite, "Suite to run")
      ->check(CLI::IsMember({"all", "identities", "recurrences", "triple", "corollary"}))
      ->capture_default_str();
  verify->add_option("--threads", verify_args.threads, "Worker threads (0: all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*cf) return cmd_cf(cf_args, std::cout, std::cerr);
    if (*build) return cmd_build(build_args, std::cout, std::cerr);
    if (*dist) return cmd_dist(dist_args, std::cout, std::cerr);
    if (*sweep) return cmd_sweep(sweep_args, std::cout, std::cerr);
    if (*verify) return cmd_verify(verify_args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
