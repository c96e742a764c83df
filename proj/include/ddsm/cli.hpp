#pragma once

// Subcommand implementations behind the `ddsm` executable. Each returns a
// process exit code:
//   0  success
//   1  an expectation requested on the command line did not hold
//   2  input or configuration error
//   3  the objective failed at run time

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "ddsm/analysis.hpp"
#include "ddsm/config_file.hpp"
#include "ddsm/engine.hpp"
#include "ddsm/objective.hpp"
#include "ddsm/trace_io.hpp"

namespace ddsm::cli {

enum ExitCode : int { kOk = 0, kExpectationFailed = 1, kInputError = 2, kObjectiveError = 3 };

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_point(const Point& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_double(p[i]);
  return s + "]";
}

inline int cmd_run(const std::string& config_path, const std::optional<std::string>& trace_override,
                   std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::string trace_path;
  try {
    cfg = load_experiment_config(config_path);
    if (trace_override) {
      trace_path = *trace_override;
    } else if (cfg.trace_path) {
      trace_path = *cfg.trace_path;
    } else {
      throw ConfigError(config_path, "trace_path", "no [output] trace_path and no --trace given");
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kInputError;
  }

  Trace trace;
  try {
    trace = run(cfg.algorithm, registry_lookup(cfg.objective));
  } catch (const ConfigError& e) {
    err << "config error: " << config_path << ": " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "objective error: " << e.what() << '\n';
    return kObjectiveError;
  }

  std::ofstream file(trace_path, std::ios::binary | std::ios::trunc);
  if (file) write_trace(file, trace);
  if (!file) {
    err << "error: cannot write trace to " << trace_path << '\n';
    return kInputError;
  }
  out << "wrote " << trace.records.size() << " records (" << to_string(trace.termination) << ", "
      << trace.evaluations << " evaluations) to " << trace_path << '\n';
  return kOk;
}

struct AnalyzeOptions {
  double cluster_tol = 1e-3;
  std::optional<std::size_t> verify_lemma;
  std::optional<double> expect_gap;
  double tol = 1e-6;
};

inline int cmd_analyze(const std::string& trace_path, const AnalyzeOptions& opt, std::ostream& out,
                       std::ostream& err) {
  Trace trace;
  ObjectiveSpec objective;
  RefinementReport rep;
  try {
    std::ifstream file(trace_path, std::ios::binary);
    if (!file) throw TraceFormatError("cannot open " + trace_path);
    trace = read_trace(file);
    objective = registry_lookup(trace.objective_name);
    rep = extract_refining(trace, objective, opt.cluster_tol);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  out << "objective: " << trace.objective_name << '\n'
      << "iterations: " << trace.records.size() << '\n'
      << "termination: " << to_string(trace.termination) << '\n'
      << "evaluations: " << trace.evaluations << '\n'
      << "unsuccessful_count: " << rep.unsuccessful.size() << '\n'
      << "refined_point: " << format_point(rep.refined_point) << '\n'
      << "refined_point_extrapolated: " << (rep.extrapolated ? "true" : "false") << '\n'
      << "last_unsuccessful: " << format_point(rep.last_unsuccessful) << '\n'
      << "alpha_tail: " << format_double(rep.alpha_tail) << '\n'
      << "refining_directions:";
  for (const auto& d : rep.refining_directions) out << ' ' << format_point(d);
  out << '\n'
      << "f_limit: " << format_double(rep.f_limit) << '\n'
      << "f_refined: " << format_double(rep.f_refined) << '\n'
      << "gap: " << format_double(rep.gap) << '\n';

  int code = kOk;
  if (opt.verify_lemma) {
    try {
      if (verify_counterexample_closed_form(trace, *opt.verify_lemma)) {
        out << "lemma-verified q=0.." << *opt.verify_lemma << '\n';
      } else {
        out << "lemma-failed q=0.." << *opt.verify_lemma << '\n';
        code = kExpectationFailed;
      }
    } catch (const AnalysisError& e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
  }
  if (opt.expect_gap) {
    const double diff = std::abs(rep.gap - *opt.expect_gap);
    const bool ok = diff <= opt.tol;
    out << "expect-gap " << format_double(*opt.expect_gap) << " tol " << format_double(opt.tol) << ": "
        << (ok ? "ok" : "FAILED") << '\n';
    if (!ok) code = kExpectationFailed;
  }
  return code;
}

inline int cmd_montecarlo(const std::string& config_path, std::size_t n_trials, std::uint64_t master_seed,
                          std::size_t workers, std::ostream& out, std::ostream& err) {
  EscapeStats stats;
  try {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    stats = monte_carlo_escape(cfg.algorithm, registry_lookup(cfg.objective), n_trials, master_seed, workers);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const LookupError& e) {
    err << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "objective error: " << e.what() << '\n';
    return kObjectiveError;
  }

  std::map<std::size_t, std::size_t> histogram;
  for (auto k : stats.first_escape_iterations) ++histogram[k];

  out << "trials: " << stats.n_trials << '\n'
      << "master_seed: " << master_seed << '\n'
      << "escaped: " << stats.n_escaped << '/' << stats.n_trials << '\n'
      << "converged: " << stats.n_converged << '/' << stats.n_trials << '\n'
      << "first_escape_histogram:\n";
  for (const auto& [k, c] : histogram) out << "  " << k << ": " << c << '\n';
  return stats.n_escaped < stats.n_trials ? kExpectationFailed : kOk;
}

/// Writes `x,f` rows on the uniform grid x_i = ((N-1-i) x_min + i x_max)/(N-1),
/// which hits both endpoints exactly.
inline int cmd_sample(const std::string& objective_name, double x_min, double x_max, std::size_t n_points,
                      const std::string& out_path, std::ostream& out, std::ostream& err) {
  ObjectiveSpec objective;
  try {
    objective = registry_lookup(objective_name);
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    err << "error: need finite x_min < x_max\n";
    return kInputError;
  }
  if (n_points < 2) {
    err << "error: need n_points >= 2\n";
    return kInputError;
  }

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << out_path << '\n';
    return kInputError;
  }
  const double steps = static_cast<double>(n_points - 1);
  file << "x,f\n";
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i);
    const double x = ((steps - t) * x_min + t * x_max) / steps;
    const Point p{x};
    file << format_double(x) << ',' << format_double(objective(p)) << '\n';
  }
  if (!file) {
    err << "error: failed writing " << out_path << '\n';
    return kInputError;
  }
  out << "wrote " << n_points << " rows to " << out_path << '\n';
  return kOk;
}

}  // namespace ddsm::cli
