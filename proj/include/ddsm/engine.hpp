#pragma once

// Directional direct search with an optional Revealing Poll.
//
// Each iteration runs Search -> Revealing Poll -> Poll and stops at the first
// step that achieves sufficient decrease. Without a revealing radius this is
// the classical dDSM loop.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddsm/common.hpp"
#include "ddsm/objective.hpp"
#include "ddsm/steps.hpp"

namespace ddsm {

struct AlgoConfig {
  Point x0{0.0};
  double alpha0 = 1.0;
  double beta1 = 0.5;
  double beta2 = 0.5;
  double gamma = 1.0;
  std::optional<double> revealing_radius;  // absent: Revealing Poll disabled
  std::size_t revealing_count = 1;
  std::string search_schedule = "none";
  std::string poll_directions = "coordinate";
  std::string forcing = "zero";
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
  double alpha_min = 0.0;

  bool revealing_enabled() const noexcept { return revealing_radius.has_value(); }

  /// Throws ConfigError naming the first offending field.
  void validate() const {
    if (x0.empty()) throw ConfigError("x0", "must have at least one component");
    if (!vec::all_finite(x0)) throw ConfigError("x0", "must be finite");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw ConfigError("alpha0", "must be a finite value > 0");
    if (!(beta1 > 0.0)) throw ConfigError("beta1", "must be > 0");
    if (!(beta2 < 1.0)) throw ConfigError("beta2", "must be < 1");
    if (beta1 > beta2) throw ConfigError("beta1", "must not exceed beta2");
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be a finite value >= 1");
    if (revealing_radius && (!(*revealing_radius > 0.0) || !std::isfinite(*revealing_radius)))
      throw ConfigError("revealing_radius", "must be a finite value > 0");
    if (revealing_count == 0) throw ConfigError("revealing_count", "must be >= 1");
    if (!(alpha_min >= 0.0)) throw ConfigError("alpha_min", "must be >= 0");
    search_lookup(search_schedule, x0.size());
    poll_lookup(poll_directions, x0.size());
    try {
      forcing_lookup(forcing);
    } catch (const LookupError& e) {
      throw ConfigError("forcing", e.what());
    }
  }

  friend bool operator==(const AlgoConfig&, const AlgoConfig&) = default;
};

enum class StepKind { Search, RevealingPoll, Poll };

inline std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Search: return "search";
    case StepKind::RevealingPoll: return "revealing_poll";
    case StepKind::Poll: return "poll";
  }
  return "?";
}

inline std::optional<StepKind> parse_step_kind(std::string_view s) {
  if (s == "search") return StepKind::Search;
  if (s == "revealing_poll") return StepKind::RevealingPoll;
  if (s == "poll") return StepKind::Poll;
  return std::nullopt;
}

struct TrialPoint {
  Point point;
  ExtendedReal value = kPlusInfinity;
  bool in_domain = true;

  friend bool operator==(const TrialPoint&, const TrialPoint&) = default;
};

struct StepOutcome {
  StepKind kind = StepKind::Poll;
  std::vector<TrialPoint> trials;
  std::optional<std::size_t> winner;  // argmin over eligible trials, if any
  bool success = false;

  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

struct IterationRecord {
  std::size_t k = 0;
  Point x;
  double alpha = 0.0;
  double f_x = 0.0;
  std::vector<StepOutcome> outcomes;  // execution order, at most one per kind
  bool success = false;
  Point x_next;
  double alpha_next = 0.0;
  double f_next = 0.0;

  const StepOutcome* outcome(StepKind kind) const {
    for (const auto& o : outcomes)
      if (o.kind == kind) return &o;
    return nullptr;
  }

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

enum class Termination { MaxIterations, AlphaMin };

inline std::string_view to_string(Termination t) {
  return t == Termination::MaxIterations ? "max_iterations" : "alpha_min";
}

inline std::optional<Termination> parse_termination(std::string_view s) {
  if (s == "max_iterations") return Termination::MaxIterations;
  if (s == "alpha_min") return Termination::AlphaMin;
  return std::nullopt;
}

struct Trace {
  AlgoConfig config;
  std::string objective_name;
  std::vector<IterationRecord> records;
  Termination termination = Termination::MaxIterations;
  std::size_t evaluations = 0;  // objective calls, including f(x0)

  /// Incumbent after the last iteration (x0 for an empty trace).
  const Point& final_point() const { return records.empty() ? config.x0 : records.back().x_next; }

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Building blocks of one iteration

/// True iff f_t is finite and f_t < f_x - rho(dist).
inline bool sufficient_decrease(ExtendedReal f_t, double f_x, double dist, const ForcingFunction& forcing) {
  if (!is_finite_value(f_t)) return false;
  return f_t < f_x - forcing(dist);
}

/// Index of the smallest finite in-domain value; ties go to the earliest trial.
inline std::optional<std::size_t> select_candidate(std::span<const TrialPoint> trials) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    if (!t.in_domain || !is_finite_value(t.value)) continue;
    if (!best || t.value < trials[*best].value) best = i;
  }
  return best;
}

/// gamma*alpha on success, beta2*alpha on failure: deterministic picks from
/// [alpha, gamma*alpha] and [beta1*alpha, beta2*alpha].
inline double step_size_update(double alpha, bool success, const AlgoConfig& config) {
  return success ? config.gamma * alpha : config.beta2 * alpha;
}

/// Resolved plug-ins for a run. Built from the config identifiers by default;
/// callers may substitute their own.
struct StepComponents {
  SearchSchedule search;
  PollDirectionSet poll;
  ForcingFunction forcing;

  static StepComponents from_config(const AlgoConfig& config) {
    return {search_lookup(config.search_schedule, config.x0.size()),
            poll_lookup(config.poll_directions, config.x0.size()), forcing_lookup(config.forcing)};
  }
};

namespace detail {

class Evaluation {
 public:
  explicit Evaluation(const ObjectiveSpec& objective) : objective_(objective) {}

  TrialPoint operator()(Point p) {
    TrialPoint t{std::move(p), kPlusInfinity, false};
    if (!vec::all_finite(t.point) || !objective_.in_domain(t.point)) return t;
    t.in_domain = true;
    t.value = objective_(t.point);
    ++count_;
    if (std::isnan(t.value) || t.value == -kPlusInfinity)
      throw ObjectiveError("objective '" + objective_.name + "' returned a value outside R u {+inf}");
    return t;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  const ObjectiveSpec& objective_;
  std::size_t count_ = 0;
};

inline StepOutcome run_step(StepKind kind, std::vector<Point> points, std::span<const double> x, double f_x,
                            const ForcingFunction& forcing, Evaluation& evaluate) {
  StepOutcome out{kind, {}, std::nullopt, false};
  out.trials.reserve(points.size());
  // Complete evaluation: every trial point is evaluated before selection.
  for (auto& p : points) out.trials.push_back(evaluate(std::move(p)));
  out.winner = select_candidate(out.trials);
  if (out.winner) {
    const auto& w = out.trials[*out.winner];
    out.success = sufficient_decrease(w.value, f_x, vec::distance(w.point, x), forcing);
  }
  return out;
}

}  // namespace detail

/// Runs the method until max_iterations or alpha_k < alpha_min. The returned
/// trace is a pure function of (config, objective).
inline Trace run(const AlgoConfig& config, const ObjectiveSpec& objective, const StepComponents& steps) {
  config.validate();
  if (objective.dimension != config.x0.size())
    throw ConfigError("x0", "dimension " + std::to_string(config.x0.size()) + " does not match objective '" +
                                objective.name + "' of dimension " + std::to_string(objective.dimension));

  Trace trace;
  trace.config = config;
  trace.objective_name = objective.name;

  detail::Evaluation evaluate(objective);
  const TrialPoint start = evaluate(config.x0);
  if (!start.in_domain) throw InitializationError("x0 lies outside the domain");
  if (!is_finite_value(start.value)) throw InitializationError("f(x0) is not finite");

  Point x = config.x0;
  double f_x = start.value;
  double alpha = config.alpha0;
  const std::size_t n = x.size();

  trace.termination = Termination::MaxIterations;
  for (std::size_t k = 0; k < config.max_iterations; ++k) {
    if (alpha < config.alpha_min) {
      trace.termination = Termination::AlphaMin;
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.x = x;
    rec.alpha = alpha;
    rec.f_x = f_x;

    const StepOutcome* accepted = nullptr;
    auto attempt = [&](StepKind kind, std::vector<Point> points) {
      rec.outcomes.push_back(detail::run_step(kind, std::move(points), x, f_x, steps.forcing, evaluate));
      if (rec.outcomes.back().success) accepted = &rec.outcomes.back();
    };

    // An empty S_k leaves no outcome in the record.
    if (auto s = steps.search(k, x, alpha); !s.empty()) attempt(StepKind::Search, std::move(s));

    if (!accepted && config.revealing_radius) {
      Rng rng = substream(config.seed, k);
      std::vector<Point> points;
      for (auto& d : sample_ball_uniform(rng, n, *config.revealing_radius, config.revealing_count))
        points.push_back(vec::add(x, d));
      attempt(StepKind::RevealingPoll, std::move(points));
    }

    if (!accepted) {
      std::vector<Point> points;
      for (const auto& d : steps.poll(k)) points.push_back(vec::offset(x, alpha, d));
      attempt(StepKind::Poll, std::move(points));
    }

    rec.success = accepted != nullptr;
    if (accepted) {
      const auto& w = accepted->trials[*accepted->winner];
      x = w.point;
      f_x = w.value;
    }
    alpha = step_size_update(alpha, rec.success, config);

    rec.x_next = x;
    rec.alpha_next = alpha;
    rec.f_next = f_x;
    trace.records.push_back(std::move(rec));
  }

  trace.evaluations = evaluate.count();
  return trace;
}

inline Trace run(const AlgoConfig& config, const ObjectiveSpec& objective) {
  config.validate();
  return run(config, objective, StepComponents::from_config(config));
}

}  // namespace ddsm
