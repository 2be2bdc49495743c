// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "floquet/expression.hpp"
#include "floquet/grid.hpp"

namespace floquet {

/// One term coeff * exp(2πi mode·x) of a Fourier-mode coefficient field.
struct FourierTerm {
  std::vector<int> mode;
  std::complex<double> coeff;
};

/// A coefficient field: constant, expression in x1/x2, or Fourier modes.
using FieldSpec = std::variant<double, Expression, std::vector<FourierTerm>>;

struct CoefficientSpec {
  std::vector<std::vector<FieldSpec>> a;  // n x n, symmetric
  std::vector<FieldSpec> b;               // n entries; empty means zero drift
  FieldSpec c = 0.0;
};

/// Sampled coefficients of P = -Σ a_ij ∂_i∂_j + Σ b_i ∂_i + c on a torus grid.
///
/// Construction validates realness, symmetry of a and uniform ellipticity.
class PeriodicCoefficients {
 public:
  PeriodicCoefficients(TorusGrid grid, std::vector<std::vector<RealVector>> a, std::vector<RealVector> b,
                       RealVector c);

  /// Constant-coefficient operator.
  static PeriodicCoefficients constant(const TorusGrid& grid, const Eigen::MatrixXd& a, const RealVector& b,
                                       double c);

  const TorusGrid& grid() const { return grid_; }
  int dimension() const { return grid_.dimension(); }
  const RealVector& a(int i, int j) const { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const RealVector& b(int i) const { return b_[static_cast<std::size_t>(i)]; }
  const RealVector& c() const { return c_; }
  /// min over nodes of the smallest eigenvalue of a(x).
  double ellipticity_const() const { return ellipticity_; }

  /// P + t.
  PeriodicCoefficients shifted(double t) const;
  /// s P, s > 0.
  PeriodicCoefficients scaled(double s) const;
  /// Coefficients translated by whole grid steps: f(x) -> f(x - offset·h).
  PeriodicCoefficients translated(const std::vector<int>& node_offsets) const;

 private:
  TorusGrid grid_;
  std::vector<std::vector<RealVector>> a_;
  std::vector<RealVector> b_;
  RealVector c_;
  double ellipticity_;
};

/// Samples one field on the grid. Throws "coefficients must be real" for
/// Fourier data with a non-negligible imaginary part.
RealVector sample_field(const FieldSpec& spec, const TorusGrid& grid);

PeriodicCoefficients make_coefficients(const CoefficientSpec& spec, const TorusGrid& grid);

struct AdjointResult {
  PeriodicCoefficients coefficients;
  std::vector<std::string> warnings;
};

/// Nondivergence-form coefficients of P*v = -Σ∂_i∂_j(a_ij v) - Σ∂_i(b_i v) + c v,
/// with derivatives of a and b taken by trigonometric differentiation.
AdjointResult formal_adjoint(const PeriodicCoefficients& coeffs);

}  // namespace floquet
