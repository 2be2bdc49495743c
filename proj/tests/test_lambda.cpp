// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "floquet/error.hpp"
#include "floquet/lambda.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

const oracle::Ode1d kMathieuDrift{[](double) { return 1.0; },
                                  [](double x) { return 0.3 + 0.2 * std::sin(kTwoPi * x); },
                                  [](double x) { return 1.0 + 0.5 * std::cos(kTwoPi * x); }};

RealVector v2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST(Lambda, ConstantCoefficientClosedForm) {
  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.3, 2.0;
  const Eigen::Vector2d b(0.5, -0.2);
  const PeriodicCoefficients p = fixtures::constant_2d(a, b, 0.8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 10; ++i) {
    const RealVector xi = v2(u(rng), u(rng));
    const double expected = -xi.dot(a * xi) + b.dot(xi) + 0.8;
    EXPECT_NEAR(lambda_at(p, xi).lambda, expected, 1e-10);
  }
}

TEST(Lambda, MathieuWithDriftMatchesShootingOracle) {
  const PeriodicCoefficients p = fixtures::mathieu(32, true);
  for (double xi : {-1.0, -0.2, 0.4, 1.3}) {
    const double lambda = lambda_at(p, RealVector::Constant(1, xi)).lambda;
    const double reference = oracle::principal_lambda_by_shooting(kMathieuDrift, xi, lambda - 0.5, lambda + 0.5);
    EXPECT_NEAR(lambda, reference, 1e-9) << xi;
  }
}

TEST(Lambda, GradientMatchesFiniteDifferences) {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  const RealVector xi = v2(0.3, -0.4);
  const RealVector g = lambda_gradient(p, xi);
  const double h = 1e-5;
  for (int l = 0; l < 2; ++l) {
    RealVector e = RealVector::Zero(2);
    e[l] = h;
    const double fd = (lambda_at(p, xi + e).lambda - lambda_at(p, xi - e).lambda) / (2 * h);
    EXPECT_NEAR(g[l], fd, 1e-7);
  }
}

TEST(Lambda, MidpointConcavity) {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 8; ++i) {
    const RealVector a = v2(u(rng), u(rng));
    const RealVector b = v2(u(rng), u(rng));
    const double mid = lambda_at(p, 0.5 * (a + b)).lambda;
    EXPECT_GE(mid, 0.5 * (lambda_at(p, a).lambda + lambda_at(p, b).lambda) - 1e-9);
  }
}

TEST(Lambda, HessianOfConstantOperatorIsMinusTwoA) {
  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.3, 2.0;
  const PeriodicCoefficients p = fixtures::constant_2d(a, Eigen::Vector2d(0.1, 0.2), 1.0);
  const HessianResult h = lambda_hessian(p, v2(0.2, 0.1));
  EXPECT_LT((h.hessian + 2 * a).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LT(h.eigenvalues.maxCoeff(), 0.0);
}

TEST(MaximizeLambda, DriftShiftsTheMaximizer) {
  const PeriodicCoefficients p = fixtures::constant_1d(1.0, 0.6, 0.5);
  const LambdaMaximum m = maximize_lambda(p);
  EXPECT_NEAR(m.xi_star[0], 0.3, 1e-10);
  EXPECT_NEAR(m.lambda0, 0.5 + 0.09, 1e-12);
  EXPECT_LE(m.gradient_norm, 1e-10);
}

TEST(MaximizeLambda, VariableCoefficientsStationaryAndConcave) {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  const LambdaMaximum m = maximize_lambda(p);
  EXPECT_LE(m.gradient_norm, 1e-10);
  EXPECT_LT(lambda_hessian(p, m.xi_star).eigenvalues.maxCoeff(), -1e-6);
  for (const RealVector& d : {v2(0.05, 0), v2(0, -0.05), v2(0.03, 0.03)}) {
    EXPECT_LT(lambda_at(p, m.xi_star + d).lambda, m.lambda0);
  }
}

TEST(TraceXi, UnitCircleForHelmholtzOperator) {
  const PeriodicCoefficients p = fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 1.0);
  const XiSurface s = trace_xi(p, 64);
  ASSERT_EQ(s.nodes.size(), 64u);
  for (const XiNode& n : s.nodes) {
    EXPECT_NEAR(n.radius, 1.0, 1e-12);
    EXPECT_NEAR(n.xi.norm(), 1.0, 1e-12);
    EXPECT_LE(n.lambda_residual, 1e-12);
  }
  EXPECT_TRUE(s.is_convex());
  EXPECT_EQ(s.hull.size(), 64u);
}

TEST(TraceXi, OneDimensionalDriftHasTwoPoints) {
  const PeriodicCoefficients p = fixtures::constant_1d(1.0, 1.0, 0.0);  // Λ(ξ) = ξ - ξ²
  const XiSurface s = trace_xi(p, 2);
  ASSERT_EQ(s.nodes.size(), 2u);
  EXPECT_NEAR(s.nodes[0].xi[0], 0.0, 1e-10);
  EXPECT_NEAR(s.nodes[1].xi[0], 1.0, 1e-10);
  const IndicatorFn h(s);
  EXPECT_NEAR(h(RealVector::Constant(1, 1.0)), 1.0, 1e-10);
  EXPECT_NEAR(h(RealVector::Constant(1, -1.0)), 0.0, 1e-10);
}

TEST(TraceXi, VariableOperatorTracesConvexCurve) {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  const XiSurface s = trace_xi(p, 24);
  EXPECT_TRUE(s.is_convex());
  for (const XiNode& n : s.nodes) EXPECT_LE(n.lambda_residual, 1e-10);
}

TEST(TraceXi, RefusesNonPositiveLambda0) {
  const PeriodicCoefficients p = fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), -1.0);
  try {
    trace_xi(p, 16);
    FAIL();
  } catch (const HypothesisViolation& e) {
    EXPECT_NE(std::string(e.what()).find("theorem hypothesis violated: Λ₀ must be positive"), std::string::npos);
  }
  // Λ₀ = 0 exactly (the free operator) is also refused.
  EXPECT_THROW(trace_xi(fixtures::constant_1d(1.0, 0.0, 0.0), 2), HypothesisViolation);
}

TEST(Indicator, EllipseSupportFunction) {
  Eigen::Matrix2d a;
  a << 1.0, 0.0, 0.0, 4.0;
  const PeriodicCoefficients p = fixtures::constant_2d(a, Eigen::Vector2d::Zero(), 1.0);
  const int m = 256;
  const IndicatorFn h(trace_xi(p, m));
  // A polygon inscribed with angular step Δ under-estimates the support
  // function by at most a chord sagitta.
  const double ds = kTwoPi / m;
  for (int j = 0; j < 32; ++j) {
    const double t = kTwoPi * j / 32 + 0.01;
    const RealVector w = v2(std::cos(t), std::sin(t));
    const double exact = std::sqrt(w[0] * w[0] + w[1] * w[1] / 4);
    EXPECT_LE(h(w), exact + 1e-12);
    EXPECT_GE(h(w), exact - 4 * ds * ds);
  }
  EXPECT_THROW(h(v2(1.0, 1.0)), InvalidInput);
}

TEST(SignReport, DivergenceFormHasZeroLambda0) {
  const SignReport r = lambda0_sign_report(fixtures::divergence_form(32));
  EXPECT_TRUE(r.c_identically_zero);
  EXPECT_NEAR(r.lambda0, 0.0, 1e-7);
  EXPECT_TRUE(r.lambda0_zero);
  ASSERT_TRUE(r.drift_integral.has_value());
  EXPECT_NEAR((*r.drift_integral)[0], 0.0, 1e-7);
  ASSERT_TRUE(r.gamma.has_value());
  EXPECT_NEAR((*r.gamma)[0], 0.0, 1e-7);
  EXPECT_TRUE(r.drift_criterion_consistent.value());
  EXPECT_TRUE(r.gamma_criterion_consistent.value());
}

TEST(SignReport, ConstantDriftGivesPositiveLambda0) {
  const double b0 = 0.8;
  const SignReport r = lambda0_sign_report(fixtures::constant_1d(1.0, b0, 0.0));
  EXPECT_NEAR(r.lambda0, b0 * b0 / 4, 1e-8);
  EXPECT_NEAR((*r.drift_integral)[0], b0, 1e-8);
  EXPECT_FALSE(r.lambda0_zero);
  EXPECT_TRUE(r.drift_criterion_consistent.value());
  EXPECT_TRUE(r.gamma_criterion_consistent.value());
}

TEST(SignReport, NegativePotential) {
  const SignReport r = lambda0_sign_report(fixtures::constant_1d(1.0, 0.0, -0.5));
  EXPECT_FALSE(r.c_nonnegative);
  EXPECT_NEAR(r.lambda0, -0.5, 1e-12);
  EXPECT_FALSE(r.gamma.has_value());
}

TEST(Tube, MarginVanishesOnlyOnTheSurface) {
  const PeriodicCoefficients p = fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 1.0);
  EXPECT_NEAR(tube_margin(p, v2(0, 0), v2(0.6, 0.8)), 0.0, 1e-12);
  EXPECT_GT(tube_margin(p, v2(0.5, 0), v2(0.6, 0.8)), 0.1);
}

TEST(Tube, ExclusivityOnVariableOperator) {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  const XiSurface s = trace_xi(p, 24);
  const TubeReport r = tube_exclusivity_check(p, s, 30, 7);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.samples, 30);
  EXPECT_GT(r.min_margin, 1e-6);
}
