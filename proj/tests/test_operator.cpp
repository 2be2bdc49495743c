// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "floquet/error.hpp"
#include "floquet/linalg.hpp"
#include "floquet/operator.hpp"
#include "oracles.hpp"

using namespace floquet;
using cd = std::complex<double>;

namespace {

// Max over `a` of the distance to the nearest entry of `b`, and vice versa.
double set_distance(const ComplexVector& a, const std::vector<cd>& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    for (const cd& v : b) best = std::min(best, std::abs(a[i] - v));
    worst = std::max(worst, best);
  }
  for (const cd& v : b) worst = std::max(worst, (a.array() - v).abs().minCoeff());
  return worst;
}

}  // namespace

TEST(Coefficients, ValidatesShapeSymmetryAndEllipticity) {
  const TorusGrid g(2, {4, 4});
  Eigen::Matrix2d a;
  a << 1, 0.2, 0.3, 1;
  EXPECT_THROW(PeriodicCoefficients::constant(g, a, Eigen::Vector2d::Zero(), 1.0), InvalidInput);
  a << 1, 2, 2, 1;
  try {
    PeriodicCoefficients::constant(g, a, Eigen::Vector2d::Zero(), 1.0);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("not uniformly elliptic"), std::string::npos);
  }
  EXPECT_THROW(fixtures::constant_1d(-1.0, 0.0, 1.0), InvalidInput);
}

TEST(Coefficients, FourierFieldsMustBeReal) {
  const TorusGrid g(1, {8});
  const FieldSpec real{std::vector<FourierTerm>{{{0}, 1.0}, {{1}, 0.25}, {{-1}, 0.25}}};
  const RealVector v = sample_field(real, g);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(v[j], 1.0 + 0.5 * std::cos(kTwoPi * j / 8.0), 1e-14);
  const FieldSpec complex{std::vector<FourierTerm>{{{1}, cd{0.0, 1.0}}}};
  try {
    sample_field(complex, g);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("coefficients must be real"), std::string::npos);
  }
}

TEST(Coefficients, ShiftScaleTranslate) {
  const PeriodicCoefficients m = fixtures::mathieu(16, true);
  EXPECT_LT((m.shifted(2.0).c() - (m.c().array() + 2.0).matrix()).norm(), 1e-15);
  EXPECT_LT((m.scaled(3.0).b(0) - 3.0 * m.b(0)).norm(), 1e-15);
  const PeriodicCoefficients t = m.translated({1});
  EXPECT_DOUBLE_EQ(t.c()[1], m.c()[0]);
  EXPECT_DOUBLE_EQ(t.c()[0], m.c()[15]);
}

TEST(Assemble, ConstantCoefficientSpectrumMatchesSymbol) {
  const double a = 1.3, b = 0.4, c = 0.7;
  const PeriodicCoefficients p = fixtures::constant_1d(a, b, c, 8);
  for (const cd k : {cd{0.3, 0.0}, cd{0.0, -0.8}, cd{1.1, 0.5}}) {
    const ComplexVector ev = eigenvalues(assemble(p, ComplexVector::Constant(1, k)).matrix);
    // Seven modes away from the Nyquist index are exact eigenvalues.
    const auto expected = oracle::constant_symbol_1d(8, a, b, c, k);
    for (const cd& v : expected) EXPECT_LT((ev.array() - v).abs().minCoeff(), 1e-9 * (1 + std::abs(v))) << v;
  }
}

TEST(Assemble, RealForImaginaryQuasimomentum) {
  const PeriodicCoefficients p = fixtures::variable_2d(8);
  RealVector xi(2);
  xi << 0.4, -0.9;
  const AssembledOperator op = assemble(p, imaginary_quasimomentum(xi));
  EXPECT_TRUE(op.is_real());
  EXPECT_NO_THROW(op.real_matrix());
  const AssembledOperator cplx = assemble(p, xi.cast<cd>());
  EXPECT_FALSE(cplx.is_real());
  EXPECT_THROW(cplx.real_matrix(), Error);
}

TEST(Assemble, HermitianForRealQuasimomentumWithoutDrift) {
  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.3, 2.0;
  const PeriodicCoefficients p = fixtures::constant_2d(a, Eigen::Vector2d::Zero(), 0.5, 6);
  for (const double kk : {0.0, 0.7, kPi}) {
    ComplexVector k(2);
    k << kk, -0.5 * kk;
    const Eigen::MatrixXcd m = assemble(p, k).matrix;
    EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Assemble, CovariantUnderReciprocalLatticeShift) {
  const PeriodicCoefficients p = fixtures::variable_2d(8);
  ComplexVector k(2);
  k << cd{0.3, -0.2}, cd{-1.0, 0.1};
  ComplexVector k2 = k;
  k2[1] += kTwoPi;
  const ComplexVector a = sorted_by_real_part(eigenvalues(assemble(p, k).matrix));
  const ComplexVector b = sorted_by_real_part(eigenvalues(assemble(p, k2).matrix));
  EXPECT_LT(set_distance(a, std::vector<cd>(b.data(), b.data() + b.size())), 1e-8 * a.cwiseAbs().maxCoeff());
}

TEST(FormalAdjoint, ConstantCoefficientsGiveTransposeAtReflectedQuasimomentum) {
  Eigen::Matrix2d a;
  a << 1.0, 0.2, 0.2, 1.5;
  const PeriodicCoefficients p = fixtures::constant_2d(a, Eigen::Vector2d(0.3, -0.4), 1.0, 6);
  const AdjointResult adj = formal_adjoint(p);
  EXPECT_TRUE(adj.warnings.empty());
  ComplexVector k(2);
  k << cd{0.4, 0.1}, cd{-0.2, 0.3};
  const Eigen::MatrixXcd lhs = assemble(adj.coefficients, k).matrix;
  const Eigen::MatrixXcd rhs = assemble(p, ComplexVector(-k)).matrix.transpose();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FormalAdjoint, DivergenceFormIsFormallySelfAdjoint) {
  const PeriodicCoefficients p = fixtures::divergence_form(32);
  const AdjointResult adj = formal_adjoint(p);
  EXPECT_LT((adj.coefficients.b(0) - p.b(0)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(adj.coefficients.c().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FormalAdjoint, WarnsWhenDerivativesAreUnderResolved) {
  const TorusGrid g(1, {8});
  RealVector rough(8);
  for (int j = 0; j < 8; ++j) rough[j] = 1.0 + 0.3 * (j % 2);
  const PeriodicCoefficients p(g, {{rough}}, {RealVector::Zero(8)}, RealVector::Ones(8));
  EXPECT_FALSE(formal_adjoint(p).warnings.empty());
}

TEST(ShiftedDerivative, MatchesAnalyticDerivative) {
  const TorusGrid g(1, {16});
  const cd k{0.0, -0.6};  // multiplies by e^{0.6x} conjugation
  ComplexVector f(16), expected(16);
  for (int j = 0; j < 16; ++j) {
    const double x = j / 16.0;
    f[j] = std::sin(kTwoPi * x);
    expected[j] = kTwoPi * std::cos(kTwoPi * x) + cd{0, 1} * k * std::sin(kTwoPi * x);
  }
  EXPECT_LT((apply_shifted_derivative(g, ComplexVector::Constant(1, k), 0, f) - expected).norm(), 1e-12);
}

TEST(ApplyOnBox, SecondOrderAccurate) {
  const PeriodicCoefficients p = fixtures::mathieu(16);
  auto residual = [&](double h) {
    const BoxGrid box = make_box(RealVector::Constant(1, 0.0), RealVector::Constant(1, 1.0), h);
    BoxFunction f{box, ComplexVector(static_cast<Eigen::Index>(box.node_count()))};
    // u = sin(2πx): P u = (4π² + 1 + 0.5 cos 2πx) sin 2πx
    for (std::size_t i = 0; i < box.node_count(); ++i) f.values[static_cast<Eigen::Index>(i)] = std::sin(kTwoPi * box.node(i)[0]);
    const BoxFunction pu = apply_on_box(p, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < pu.box.node_count(); ++i) {
      const double x = pu.box.node(i)[0];
      const double exact = (kTwoPi * kTwoPi + 1 + 0.5 * std::cos(kTwoPi * x)) * std::sin(kTwoPi * x);
      worst = std::max(worst, std::abs(pu.values[static_cast<Eigen::Index>(i)] - exact));
    }
    return worst;
  };
  const double e1 = residual(1.0 / 20);
  const double e2 = residual(1.0 / 40);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(ApplyOnBox, RejectsTinyBoxes) {
  const PeriodicCoefficients p = fixtures::mathieu(16);
  const BoxGrid box = make_box(RealVector::Constant(1, 0.0), RealVector::Constant(1, 0.1), 0.1);
  BoxFunction f{box, ComplexVector::Zero(static_cast<Eigen::Index>(box.node_count()))};
  EXPECT_THROW(apply_on_box(p, f), InvalidInput);
}
