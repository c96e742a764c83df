#pragma once

// Post-hoc analysis of traces: refining subsequences and discontinuity gaps,
// the closed-form check of the counterexample trajectory, covering radii of
// trial points, a sampled Clarke-derivative estimate, and the Monte Carlo
// escape harness for the repaired method.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "ddsm/common.hpp"
#include "ddsm/engine.hpp"
#include "ddsm/objective.hpp"

namespace ddsm {

// Refining subsequence

struct RefinementReport {
  std::vector<std::size_t> unsuccessful;   // K
  Point refined_point;                     // estimate of x*
  Point last_unsuccessful;                 // incumbent at the last index of K
  bool extrapolated = false;               // refined_point came from the geometric tail
  double alpha_tail = 0.0;                 // final step size of the run
  std::vector<Point> refining_directions;  // cluster representatives, unit length
  std::vector<double> f_tail;              // f(x_k) for k in K
  double f_limit = 0.0;
  double f_refined = 0.0;                  // fresh evaluation at refined_point
  double gap = 0.0;                        // f_limit - f_refined
};

namespace detail {

/// Limit of a sequence whose last three distinct terms contract collinearly
/// by a ratio r in (0,1); nullopt if the tail does not look geometric.
inline std::optional<Point> geometric_limit(std::span<const Point> terms) {
  if (terms.size() < 3) return std::nullopt;
  const Point& a = terms[terms.size() - 3];
  const Point& b = terms[terms.size() - 2];
  const Point& c = terms[terms.size() - 1];
  const Point d1 = vec::subtract(b, a);
  const Point d2 = vec::subtract(c, b);
  const double d1d1 = vec::dot(d1, d1);
  if (d1d1 == 0.0) return std::nullopt;
  const double r = vec::dot(d2, d1) / d1d1;
  if (!(r > 0.0 && r < 1.0)) return std::nullopt;
  double off = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) off = std::max(off, std::abs(d2[i] - r * d1[i]));
  if (off > 1e-9 * vec::norm(d2)) return std::nullopt;
  const double w = r / (1.0 - r);
  return vec::offset(c, w, d2);
}

inline double angle_between(std::span<const double> u, std::span<const double> v) {
  return std::acos(std::clamp(vec::dot(u, v), -1.0, 1.0));
}

}  // namespace detail

/// K is every unsuccessful iteration. The refined point is the geometric
/// limit of the distinct incumbents along K when their tail contracts
/// geometrically, and the last unsuccessful incumbent otherwise.
/// Refining directions come from Poll and Revealing Poll trials at k in K,
/// clustered greedily in order of first appearance.
inline RefinementReport extract_refining(const Trace& trace, const ObjectiveSpec& objective,
                                         double cluster_tol = 1e-3) {
  RefinementReport rep;
  std::vector<Point> distinct;
  for (const auto& rec : trace.records) {
    if (rec.success) continue;
    rep.unsuccessful.push_back(rec.k);
    rep.f_tail.push_back(rec.f_x);
    if (distinct.empty() || distinct.back() != rec.x) distinct.push_back(rec.x);

    for (const auto& o : rec.outcomes) {
      if (o.kind == StepKind::Search) continue;
      for (const auto& t : o.trials) {
        Point d = vec::subtract(t.point, rec.x);
        const double len = vec::norm(d);
        if (len == 0.0 || !std::isfinite(len)) continue;
        for (auto& c : d) c /= len;
        const bool known = std::any_of(rep.refining_directions.begin(), rep.refining_directions.end(),
                                       [&](const Point& u) { return detail::angle_between(u, d) <= cluster_tol; });
        if (!known) rep.refining_directions.push_back(std::move(d));
      }
    }
  }
  if (rep.unsuccessful.empty()) throw AnalysisError("trace has no unsuccessful iteration");

  const auto& last = trace.records[rep.unsuccessful.back()];
  rep.last_unsuccessful = last.x;
  rep.f_limit = last.f_x;
  rep.alpha_tail = trace.records.back().alpha_next;

  if (auto lim = detail::geometric_limit(distinct)) {
    rep.refined_point = std::move(*lim);
    rep.extrapolated = true;
  } else {
    rep.refined_point = rep.last_unsuccessful;
  }
  rep.f_refined = objective(rep.refined_point);
  rep.gap = rep.f_limit - rep.f_refined;
  return rep;
}

// Geometric decay fit of a positive sequence v_i ~ v_0 * ratio^i

struct GeometricFit {
  double ratio = 0.0;
  double max_relative_residual = 0.0;
};

inline GeometricFit fit_geometric_decay(std::span<const double> values) {
  if (values.size() < 2) throw AnalysisError("geometric fit needs at least two values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw AnalysisError("geometric fit needs positive values");
    const double xi = static_cast<double>(i);
    const double yi = std::log(values[i]);
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  GeometricFit fit{std::exp(slope), 0.0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double model = std::exp(intercept + slope * static_cast<double>(i));
    fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(model - values[i]) / values[i]);
  }
  return fit;
}

// Closed-form check of the counterexample trajectory:
//   x_{2q} = x_{2q+1} = 5/4 * 2^-q,  alpha_{2q} = 1/4 * 2^-q = 2 * alpha_{2q+1}.

inline bool verify_counterexample_closed_form(const Trace& trace, std::size_t q_max) {
  if (trace.records.size() < 2 * q_max + 2)
    throw AnalysisError("trace has " + std::to_string(trace.records.size()) + " records, need " +
                        std::to_string(2 * q_max + 2));
  for (std::size_t q = 0; q <= q_max; ++q) {
    const int e = -static_cast<int>(q);
    const double x_q = std::ldexp(1.25, e);
    const double a_q = std::ldexp(0.25, e);
    const auto& even = trace.records[2 * q];
    const auto& odd = trace.records[2 * q + 1];

    if (even.x != Point{x_q} || odd.x != Point{x_q}) return false;
    if (even.alpha != a_q || 2.0 * odd.alpha != a_q) return false;

    // Even: unsuccessful, Poll evaluated at both x - alpha and x + alpha.
    if (even.success || even.outcome(StepKind::Search) != nullptr) return false;
    const StepOutcome* poll = even.outcome(StepKind::Poll);
    if (poll == nullptr || poll->trials.size() != 2) return false;
    if (poll->trials[0].point != Point{x_q - a_q} || poll->trials[1].point != Point{x_q + a_q}) return false;
    for (const auto& t : poll->trials)
      if (!t.in_domain || !is_finite_value(t.value)) return false;

    // Odd: successful through the Search step alone.
    if (!odd.success || odd.outcomes.size() != 1) return false;
    if (odd.outcomes.front().kind != StepKind::Search || !odd.outcomes.front().success) return false;
  }
  return true;
}

// Covering radius

using RegionPredicate = std::function<bool(std::span<const double>)>;

/// Largest distance from a grid point of the ball B_R(center) (optionally
/// intersected with `region`) to its nearest element of `points`. The grid
/// has `grid_resolution` nodes per axis over the bounding box. +inf for an
/// empty point set; 0 if no grid node lies in the region.
inline double covering_radius(std::span<const Point> points, std::span<const double> center, double radius,
                              std::size_t grid_resolution, const RegionPredicate& region = {}) {
  if (grid_resolution < 2) throw AnalysisError("grid_resolution must be >= 2");
  if (points.empty()) return kPlusInfinity;
  const std::size_t n = center.size();
  const double steps = static_cast<double>(grid_resolution - 1);

  std::vector<std::size_t> idx(n, 0);
  Point g(n);
  double worst = 0.0;
  for (;;) {
    for (std::size_t j = 0; j < n; ++j) {
      const double i = static_cast<double>(idx[j]);
      g[j] = ((steps - i) * (center[j] - radius) + i * (center[j] + radius)) / steps;
    }
    if (vec::distance(g, center) <= radius * (1.0 + 1e-12) && (!region || region(g))) {
      double nearest = kPlusInfinity;
      for (const auto& p : points) nearest = std::min(nearest, vec::distance(g, p));
      worst = std::max(worst, nearest);
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == grid_resolution) idx[j++] = 0;
    if (j == n) break;
  }
  return worst;
}

// Clarke generalized directional derivative

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline std::uint64_t nth_prime(std::size_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t c = 2;; ++c) {
    bool prime = true;
    for (std::uint64_t p = 2; p * p <= c; ++p)
      if (c % p == 0) {
        prime = false;
        break;
      }
    if (prime && count++ == n) return c;
  }
}

}  // namespace detail

/// Finite-sample lower approximation of
///   f°(x; d) = limsup_{y -> x, t -> 0+} (f(y + t d) - f(y)) / t.
/// Sample i takes y from a Halton sequence on the box [x - h_max, x + h_max]^n
/// (kept only if inside the ball B_{h_max}(x)) and t log-spaced in
/// [h_min, h_max] from the next Halton coordinate. The first n_samples
/// samples are a prefix of the first n_samples + 1, so the estimate is
/// non-decreasing in n_samples.
inline double clarke_estimate(const ObjectiveSpec& objective, std::span<const double> x, std::span<const double> d,
                              double h_min, double h_max, std::size_t n_samples) {
  if (!(h_min > 0.0 && h_min < h_max)) throw AnalysisError("clarke_estimate needs 0 < h_min < h_max");
  const std::size_t n = x.size();
  std::vector<std::uint64_t> bases(n + 1);
  for (std::size_t j = 0; j <= n; ++j) bases[j] = detail::nth_prime(j);

  double best = -kPlusInfinity;
  Point y(n);
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      y[j] = x[j] + h_max * (2.0 * detail::radical_inverse(i, bases[j]) - 1.0);
    if (vec::distance(y, x) > h_max) continue;
    const double u = detail::radical_inverse(i, bases[n]);
    const double t = h_min * std::pow(h_max / h_min, u);
    const double fy = objective(y);
    const double fyt = objective(vec::offset(y, t, d));
    if (!std::isfinite(fy) || !std::isfinite(fyt)) continue;
    best = std::max(best, (fyt - fy) / t);
  }
  return best;
}

// Monte Carlo escape harness for the counterexample

/// I = [-sqrt(2) - 1, 0], exactly the set where the counterexample is <= 0.
inline constexpr double kEscapeLower = -std::numbers::sqrt2 - 1.0;

inline bool in_escape_interval(double x) { return x >= kEscapeLower && x <= 0.0; }

struct EscapeStats {
  std::size_t n_trials = 0;
  std::size_t n_escaped = 0;
  std::size_t n_converged = 0;
  std::vector<std::size_t> first_escape_iterations;  // one per escaped trial, in trial order

  friend bool operator==(const EscapeStats&, const EscapeStats&) = default;
};

struct TrialOutcome {
  std::optional<std::size_t> first_escape;  // index j of the first incumbent x_j in I
  bool converged = false;
};

inline constexpr double kConvergenceTolerance = 1e-3;
inline constexpr double kGlobalMinimizer = -1.0;

/// Escape is read from incumbent values (f(x_j) <= 0); convergence means the
/// final incumbent lies within 1e-3 of -1.
inline TrialOutcome classify_trial(const Trace& trace) {
  TrialOutcome out;
  if (!trace.records.empty() && trace.records.front().f_x <= 0.0) out.first_escape = 0;
  for (std::size_t k = 0; k < trace.records.size() && !out.first_escape; ++k)
    if (trace.records[k].f_next <= 0.0) out.first_escape = k + 1;
  out.converged = std::abs(trace.final_point()[0] - kGlobalMinimizer) <= kConvergenceTolerance;
  return out;
}

/// Seed used by trial i of a Monte Carlo batch.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return derive_seed(master_seed ^ 0xD1B54A32D192ED03ULL, trial);
}

/// Runs n_trials independent copies of base_config (seeds from trial_seed)
/// on up to `workers` threads. Aggregation is by trial index, so the result
/// does not depend on the worker count.
inline EscapeStats monte_carlo_escape(const AlgoConfig& base_config, const ObjectiveSpec& objective,
                                      std::size_t n_trials, std::uint64_t master_seed, std::size_t workers = 1) {
  if (!base_config.revealing_enabled())
    throw ConfigError("revealing_radius", "Monte Carlo escape runs need the Revealing Poll enabled");
  if (objective.name != "counterexample")
    throw ConfigError("objective", "Monte Carlo escape runs are defined for the counterexample objective");
  base_config.validate();
  const StepComponents steps = StepComponents::from_config(base_config);

  std::vector<TrialOutcome> outcomes(n_trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_trials; i = next++) {
      AlgoConfig cfg = base_config;
      cfg.seed = trial_seed(master_seed, i);
      outcomes[i] = classify_trial(run(cfg, objective, steps));
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n_trials, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  EscapeStats stats;
  stats.n_trials = n_trials;
  for (const auto& o : outcomes) {
    if (o.first_escape) {
      ++stats.n_escaped;
      stats.first_escape_iterations.push_back(*o.first_escape);
      if (o.converged) ++stats.n_converged;
    }
  }
  return stats;
}

}  // namespace ddsm
