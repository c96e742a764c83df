#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddsm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Directional direct search with a Revealing Poll"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;

  auto* run = app.add_subcommand("run", "Run an experiment config and write its trace");
  std::string run_trace;
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--trace", run_trace, "Trace output path (overrides [output] trace_path)");

  auto* analyze = app.add_subcommand("analyze", "Report the refining subsequence and discontinuity gap");
  ddsm::cli::AnalyzeOptions aopt;
  std::size_t verify_q = 0;
  double expect_gap = 0.0;
  analyze->add_option("trace", trace_path, "Trace file")->required();
  analyze->add_option("--cluster-tol", aopt.cluster_tol, "Angular tolerance for direction clustering (radians)");
  auto* verify_opt = analyze->add_option("--verify-lemma", verify_q, "Check the closed-form trajectory for q=0..Q");
  auto* gap_opt = analyze->add_option("--expect-gap", expect_gap, "Exit 1 unless |gap - G| <= tol");
  analyze->add_option("--tol", aopt.tol, "Tolerance for --expect-gap");

  auto* mc = app.add_subcommand("montecarlo", "Count escapes of the repaired method over seeded trials");
  std::size_t n_trials = 200;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  mc->add_option("config", config_path, "Experiment config file (Revealing Poll enabled)")->required();
  mc->add_option("--trials", n_trials, "Number of trials");
  mc->add_option("--seed", master_seed, "Master seed");
  mc->add_option("--workers", workers, "Worker threads");

  auto* sample = app.add_subcommand("sample", "Write x,f(x) on a uniform grid as CSV");
  std::string objective;
  double x_min = 0.0, x_max = 0.0;
  std::size_t n_points = 0;
  std::string out_path;
  sample->add_option("objective", objective, "Objective name")->required();
  sample->add_option("x_min", x_min)->required();
  sample->add_option("x_max", x_max)->required();
  sample->add_option("n_points", n_points)->required();
  sample->add_option("out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ddsm::cli::kInputError;
  }

  if (*run) {
    const std::optional<std::string> override = run_trace.empty() ? std::nullopt : std::optional(run_trace);
    return ddsm::cli::cmd_run(config_path, override, std::cout, std::cerr);
  }
  if (*analyze) {
    if (*verify_opt) aopt.verify_lemma = verify_q;
    if (*gap_opt) aopt.expect_gap = expect_gap;
    return ddsm::cli::cmd_analyze(trace_path, aopt, std::cout, std::cerr);
  }
  if (*mc) return ddsm::cli::cmd_montecarlo(config_path, n_trials, master_seed, workers, std::cout, std::cerr);
  if (*sample) return ddsm::cli::cmd_sample(objective, x_min, x_max, n_points, out_path, std::cout, std::cerr);
  return ddsm::cli::kInputError;
}
