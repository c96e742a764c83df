#pragma once

// Objective functions: the piecewise counterexample built from a scaled
// quartic, and a few auxiliary 1-D test functions.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddsm/common.hpp"

namespace ddsm {

/// Real polynomial with coefficients stored by ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {}

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  /// Horner evaluation from the leading coefficient down. This is the one
  /// evaluation order used everywhere so traces are bit-reproducible.
  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      const double scaled = acc * x;
      acc = scaled + *it;
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coefficients_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coefficients_.size() - 1);
    for (std::size_t i = 1; i < coefficients_.size(); ++i)
      d[i - 1] = static_cast<double>(i) * coefficients_[i];
    return Polynomial(std::move(d));
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coefficients_;
};

/// The quartic p on [1,2]: p(1) = 1, p(2) = 2, stationary at 1, 5/4 and 2,
/// with a single interior minimum at 5/4.
inline const Polynomial& counterexample_polynomial() {
  static const Polynomial p({-18.0, 60.0, -69.0, 34.0, -6.0});
  return p;
}

inline double p_eval(double x) { return counterexample_polynomial()(x); }

inline double p_deriv(double x) {
  static const Polynomial dp = counterexample_polynomial().derivative();
  return dp(x);
}

inline double p_second_deriv(double x) {
  static const Polynomial ddp = counterexample_polynomial().derivative().derivative();
  return ddp(x);
}

/// The unique integer l with 2^l <= x < 2^(l+1), read off the binary exponent
/// so dyadic boundaries classify exactly.
inline int branch_index(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("branch_index requires a finite x > 0");
  int exponent = 0;
  std::frexp(x, &exponent);  // x = m * 2^exponent, m in [0.5, 1)
  return exponent - 1;
}

/// Counterexample objective on R:
///   (x+1)^2 - 2            for x <= 0,
///   2^l * p(x / 2^l)       for x in 2^l * [1,2).
/// Discontinuous only at 0, where f(0) = -1 and the right limit is 0.
inline double f_eval(double x) {
  if (x <= 0.0) {
    const double s = x + 1.0;
    return s * s - 2.0;
  }
  const int l = branch_index(x);
  return std::ldexp(p_eval(std::ldexp(x, -l)), l);
}

using Evaluator = std::function<ExtendedReal(std::span<const double>)>;
using DomainOracle = std::function<bool(std::span<const double>)>;

/// An objective of `dimension` real variables taking values in R u {+inf},
/// plus a membership oracle for the feasible set (R^n when absent).
struct ObjectiveSpec {
  std::string name;
  std::size_t dimension = 1;
  Evaluator evaluator;
  DomainOracle domain;

  bool in_domain(std::span<const double> x) const { return !domain || domain(x); }
  ExtendedReal operator()(std::span<const double> x) const { return evaluator(x); }
};

namespace detail {

inline ObjectiveSpec scalar_objective(std::string name, double (*fn)(double)) {
  return ObjectiveSpec{std::move(name), 1,
                       [fn](std::span<const double> x) -> ExtendedReal { return fn(x[0]); }, {}};
}

inline double neg_abs(double x) { return -std::abs(x); }
inline double abs_value(double x) { return std::abs(x); }
inline double shifted_quadratic(double x) {
  const double s = x + 1.0;
  return s * s - 2.0;
}

}  // namespace detail

inline const std::vector<std::string>& objective_names() {
  static const std::vector<std::string> names{"counterexample", "neg_abs", "abs", "quadratic_1d"};
  return names;
}

inline ObjectiveSpec registry_lookup(std::string_view name) {
  if (name == "counterexample") return detail::scalar_objective("counterexample", &f_eval);
  if (name == "neg_abs") return detail::scalar_objective("neg_abs", &detail::neg_abs);
  if (name == "abs") return detail::scalar_objective("abs", &detail::abs_value);
  if (name == "quadratic_1d") return detail::scalar_objective("quadratic_1d", &detail::shifted_quadratic);

  std::string valid;
  for (const auto& n : objective_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw LookupError("unknown objective '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace ddsm
