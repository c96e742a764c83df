#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddsm {

using Point = std::vector<double>;

/// Objective values live in R u {+inf}. +inf is a sentinel that only ever
/// takes part in comparisons.
using ExtendedReal = double;

inline constexpr ExtendedReal kPlusInfinity = std::numeric_limits<double>::infinity();

inline bool is_finite_value(ExtendedReal v) { return std::isfinite(v); }

// Error hierarchy. Every error the library raises derives from Error so the
// CLI can map families onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Invalid algorithm or experiment configuration. Carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  /// Same, prefixed with a "file:line" style location.
  ConfigError(const std::string& location, std::string field, const std::string& what)
      : Error(location + ": " + (field.empty() ? what : field + ": " + what)), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// f(x0) is not finite or x0 lies outside the domain.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// The objective produced a value outside R u {+inf}.
class ObjectiveError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class TraceFormatError : public Error {
 public:
  using Error::Error;
};

namespace vec {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// x + step * d, evaluated componentwise exactly as written.
inline Point offset(std::span<const double> x, double step, std::span<const double> d) {
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double scaled = step * d[i];
    out[i] = x[i] + scaled;
  }
  return out;
}

inline Point add(std::span<const double> x, std::span<const double> d) {
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + d[i];
  return out;
}

inline Point subtract(std::span<const double> a, std::span<const double> b) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace vec
}  // namespace ddsm
