#pragma once

// Pluggable pieces of one iteration: Search schedules, Poll direction sets,
// the uniform-ball sampler behind the Revealing Poll, forcing functions, and
// the seeding scheme for random substreams.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddsm/common.hpp"

namespace ddsm {

/// (k, x_k, alpha_k) -> finite, possibly empty, list of trial points.
using SearchSchedule = std::function<std::vector<Point>(std::size_t, std::span<const double>, double)>;

/// k -> D_k, a finite list of nonzero directions.
using PollDirectionSet = std::function<std::vector<Point>(std::size_t)>;

/// Empty for even k; the single point x - 5*alpha for odd k. Walks the
/// incumbent from one local minimizer of the counterexample to the next one
/// on its left.
inline std::vector<Point> counterexample_search(std::size_t k, std::span<const double> x, double alpha) {
  if (x.size() != 1) throw DomainError("counterexample search schedule is one-dimensional");
  if (k % 2 == 0) return {};
  const double jump = 5.0 * alpha;
  return {Point{x[0] - jump}};
}

inline std::vector<Point> empty_search(std::size_t, std::span<const double>, double) { return {}; }

/// {-1, +1} in that order, for every k.
inline std::vector<Point> fixed_poll_directions_1d(std::size_t /*k*/) { return {Point{-1.0}, Point{1.0}}; }

/// -e_1, +e_1, -e_2, +e_2, ... ; coincides with the 1-D set when n = 1.
inline std::vector<Point> coordinate_directions(std::size_t n) {
  std::vector<Point> dirs;
  dirs.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Point minus(n, 0.0), plus(n, 0.0);
    minus[i] = -1.0;
    plus[i] = 1.0;
    dirs.push_back(std::move(minus));
    dirs.push_back(std::move(plus));
  }
  return dirs;
}

inline SearchSchedule search_lookup(std::string_view name, std::size_t dimension) {
  if (name == "none") return &empty_search;
  if (name == "counterexample") {
    if (dimension != 1) throw ConfigError("search_schedule", "'counterexample' requires dimension 1");
    return &counterexample_search;
  }
  throw ConfigError("search_schedule",
                    "unknown schedule '" + std::string(name) + "' (valid: counterexample, none)");
}

inline PollDirectionSet poll_lookup(std::string_view name, std::size_t dimension) {
  if (name == "pm1") {
    if (dimension != 1) throw ConfigError("poll_directions", "'pm1' requires dimension 1");
    return &fixed_poll_directions_1d;
  }
  if (name == "coordinate") {
    return [dirs = coordinate_directions(dimension)](std::size_t) { return dirs; };
  }
  throw ConfigError("poll_directions",
                    "unknown direction set '" + std::string(name) + "' (valid: pm1, coordinate)");
}

// Forcing functions

struct ForcingFunction {
  std::string name;
  std::function<double(double)> rho;

  double operator()(double t) const { return rho(t); }
};

inline ForcingFunction forcing_lookup(std::string_view name) {
  if (name == "zero") return {"zero", [](double) { return 0.0; }};
  if (name == "quadratic") return {"quadratic", [](double t) { return 1e-4 * t * t; }};
  throw LookupError("unknown forcing function '" + std::string(name) + "' (valid: zero, quadratic)");
}

// Random substreams
//
// Generator: std::mt19937_64. Every (seed, stream) pair gets its own engine
// seeded with derive_seed(seed, stream), where derive_seed applies the
// SplitMix64 finalizer twice:
//   derive_seed(s, i) = mix64(s ^ mix64(i + 0x9E3779B97F4A7C15)).
// The engine run owns one substream per iteration index k, so whether other
// steps consume randomness never shifts the Revealing Poll draws.

using Rng = std::mt19937_64;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

inline Rng substream(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

/// One uniform draw from the closed unit n-ball: a Gaussian direction scaled
/// by U^(1/n).
inline Point sample_unit_ball(Rng& rng, std::size_t n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Point dir(n);
  double len = 0.0;
  do {
    for (auto& c : dir) c = gauss(rng);
    len = vec::norm(dir);
  } while (len == 0.0);
  const double u = unif(rng);
  const double radius = n == 1 ? u : std::pow(u, 1.0 / static_cast<double>(n));
  for (auto& c : dir) c = c / len * radius;
  return dir;
}

/// m independent uniform draws from the closed ball of radius R about 0.
/// Each draw is R times a unit-ball draw, so the result is exactly
/// scale-equivariant in R for a fixed generator stream.
inline std::vector<Point> sample_ball_uniform(Rng& rng, std::size_t n, double radius, std::size_t m) {
  if (m == 0) throw DomainError("ball sampler needs at least one point");
  if (!(radius > 0.0)) throw DomainError("ball sampler needs a radius > 0");
  std::vector<Point> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Point p = sample_unit_ball(rng, n);
    for (auto& c : p) c = radius * c;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace ddsm
