#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ddsm/objective.hpp"
#include "oracles.hpp"

namespace ddsm {
namespace {

using testing::quartic_exact;

TEST(Polynomial, EndpointValues) {
  EXPECT_EQ(p_eval(1.0), 1.0);
  EXPECT_EQ(p_eval(2.0), 2.0);
}

TEST(Polynomial, InteriorValuesMatchExactRationals) {
  const auto at_5_4 = quartic_exact(5, 4);
  EXPECT_EQ(at_5_4.num, 121);
  EXPECT_EQ(at_5_4.den, 128);
  EXPECT_EQ(p_eval(1.25), 0.9453125);

  const auto at_3_2 = quartic_exact(3, 2);
  EXPECT_EQ(at_3_2.num, 9);
  EXPECT_EQ(at_3_2.den, 8);
  EXPECT_EQ(p_eval(1.5), 1.125);
}

TEST(Polynomial, HornerIsExactOnDyadicGrid) {
  // x = 1 + j/64: every intermediate of the Horner loop is a short dyadic.
  for (std::int64_t j = 0; j <= 64; ++j) {
    const auto exact = quartic_exact(64 + j, 64);
    EXPECT_EQ(p_eval(1.0 + static_cast<double>(j) / 64.0), exact.to_double()) << "j=" << j;
  }
}

TEST(Polynomial, StationaryPoints) {
  for (double x : {1.0, 1.25, 2.0}) EXPECT_LE(std::abs(p_deriv(x)), 1e-12) << x;
  EXPECT_LT(p_second_deriv(1.0), 0.0);
  EXPECT_GT(p_second_deriv(1.25), 0.0);
  EXPECT_LT(p_second_deriv(2.0), 0.0);
}

TEST(Polynomial, DerivativeCoefficients) {
  const auto dp = counterexample_polynomial().derivative();
  EXPECT_EQ(dp.coefficients(), (std::vector<double>{60.0, -138.0, 102.0, -24.0}));
  EXPECT_EQ(Polynomial({3.0}).derivative().coefficients(), std::vector<double>{0.0});
}

TEST(Polynomial, UniqueInteriorMinimum) {
  // p decreases on (1, 5/4) and increases on (5/4, 2).
  for (int i = 1; i < 100; ++i) {
    const double x = 1.0 + i / 400.0;
    EXPECT_LT(p_deriv(x), 0.0) << x;
  }
  for (int i = 1; i < 300; ++i) {
    const double x = 1.25 + i / 400.0;
    EXPECT_GT(p_deriv(x), 0.0) << x;
  }
}

TEST(BranchIndex, Examples) {
  EXPECT_EQ(branch_index(3.0), 1);
  EXPECT_EQ(branch_index(1.0), 0);
  EXPECT_EQ(branch_index(0.75), -1);
}

TEST(BranchIndex, DyadicBoundariesAreLeftClosed) {
  for (int l = -1000; l <= 1000; ++l) {
    const double b = std::ldexp(1.0, l);
    EXPECT_EQ(branch_index(b), l);
    EXPECT_EQ(branch_index(std::nextafter(b, 0.0)), l - 1);
  }
}

TEST(BranchIndex, RejectsNonPositive) {
  EXPECT_THROW(branch_index(0.0), DomainError);
  EXPECT_THROW(branch_index(-1.0), DomainError);
  EXPECT_THROW(branch_index(std::nan("")), DomainError);
}

TEST(Counterexample, Examples) {
  EXPECT_EQ(f_eval(0.0), -1.0);
  EXPECT_EQ(f_eval(1.0), 1.0);
  EXPECT_EQ(f_eval(1.25), 121.0 / 128.0);
  EXPECT_EQ(f_eval(-1.0), -2.0);
  EXPECT_EQ(f_eval(0.75), 9.0 / 16.0);
}

TEST(Counterexample, ExactOnScaledMinimizers) {
  const double p54 = p_eval(1.25);
  for (int q = 0; q <= 50; ++q) EXPECT_EQ(f_eval(std::ldexp(1.25, -q)), std::ldexp(p54, -q)) << q;
}

TEST(Counterexample, ScaledMinimizersAreLocalMinima) {
  for (int l = -20; l <= 20; ++l) {
    const double x = std::ldexp(1.25, l);
    const double fx = f_eval(x);
    for (int s : {2, 3}) {
      const double delta = std::ldexp(1.0, l - s);
      EXPECT_GT(f_eval(x + delta), fx) << "l=" << l << " s=" << s;
      EXPECT_GT(f_eval(x - delta), fx) << "l=" << l << " s=" << s;
    }
  }
}

TEST(Counterexample, ContinuousAtBranchBoundaries) {
  // Left of b = 2^l the value is (b/2) p(2 - 2 eps/b) with p'(2) = 0 and
  // |p''(2)| = 18, so the jump is about 18 b (eps/b)^2. Horner cancellation
  // near 2 adds a few hundred ulps.
  for (int l = -20; l <= 20; ++l) {
    const double b = std::ldexp(1.0, l);
    const double ulp = std::nextafter(b, 2 * b) - b;
    for (int k = 3; k <= 10; ++k) {
      const double eps = b * std::pow(10.0, -k);
      const double jump = std::abs(f_eval(b - eps) - f_eval(b));
      EXPECT_LE(jump, 20.0 * b * std::pow(10.0, -2 * k) + 256 * ulp) << "l=" << l << " k=" << k;
    }
  }
}

TEST(Counterexample, LowerSemicontinuousJumpAtZero) {
  EXPECT_EQ(f_eval(0.0), -1.0);
  // Right limit is 0: f(x) is between x/2 and x on (0, 1].
  for (int q = 1; q <= 60; ++q) {
    const double x = std::ldexp(1.0, -q) * 1.7;
    EXPECT_GT(f_eval(x), 0.0);
    EXPECT_LE(f_eval(x), 2.0 * x);
  }
  EXPECT_EQ(std::min(f_eval(0.0), 0.0), f_eval(0.0));
  // Left side is continuous into 0.
  EXPECT_NEAR(f_eval(-1e-12), -1.0, 1e-11);
}

TEST(Counterexample, QuadraticBranchOnNegatives) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-50.0, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(f_eval(x), (x + 1.0) * (x + 1.0) - 2.0);
  }
}

TEST(Counterexample, TotalOnReals) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(2.0, e(rng)) * (i % 2 ? 1.0 : -1.0);
    EXPECT_TRUE(std::isfinite(f_eval(x))) << x;
  }
}

TEST(Registry, Lookups) {
  const Point zero{0.0}, two{2.0};
  const auto ce = registry_lookup("counterexample");
  EXPECT_EQ(ce.dimension, 1u);
  EXPECT_EQ(ce(zero), -1.0);
  EXPECT_TRUE(ce.in_domain(zero));
  EXPECT_EQ(registry_lookup("neg_abs")(two), -2.0);
  EXPECT_EQ(registry_lookup("abs")(Point{-3.0}), 3.0);
  EXPECT_EQ(registry_lookup("quadratic_1d")(Point{2.0}), 7.0);
}

TEST(Registry, UnknownNameListsValidNames) {
  try {
    registry_lookup("bogus");
    FAIL() << "expected LookupError";
  } catch (const LookupError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bogus"), std::string::npos);
    for (const auto& n : objective_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
  }
}

}  // namespace
}  // namespace ddsm
