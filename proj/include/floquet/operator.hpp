// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "floquet/coefficients.hpp"

namespace floquet {

/// Collocation matrix of P(x, D + k) on the torus grid, D = -i∂.
///
/// For k = -iξ this is the conjugated operator e^{-ξ·x} P e^{ξ·x}.
struct AssembledOperator {
  ComplexVector k;
  Eigen::MatrixXcd matrix;
  std::shared_ptr<const PeriodicCoefficients> coeffs;

  /// True when every entry is real (always the case for purely imaginary k).
  bool is_real() const;
  /// Real part of the matrix; throws if the matrix is not real.
  Eigen::MatrixXd real_matrix() const;
};

AssembledOperator assemble(const PeriodicCoefficients& coeffs, const ComplexVector& k);
AssembledOperator assemble(const std::shared_ptr<const PeriodicCoefficients>& coeffs, const ComplexVector& k);

/// Quasimomentum for the conjugation parameter ξ: k = -iξ.
ComplexVector imaginary_quasimomentum(const RealVector& xi);

/// Applies (∂_axis + i k_axis) to a grid function using the same symbols as
/// `assemble`.
ComplexVector apply_shifted_derivative(const TorusGrid& grid, const ComplexVector& k, int axis,
                                       const ComplexVector& values);

/// Axis-aligned sampling box on R^n with uniform spacing.
struct BoxGrid {
  RealVector lo;
  double spacing = 0.0;
  std::vector<int> counts;

  std::size_t node_count() const;
  RealVector node(std::size_t index) const;
};

/// Box covering [lo, hi] with the given spacing (hi is rounded to the grid).
BoxGrid make_box(const RealVector& lo, const RealVector& hi, double spacing);

struct BoxFunction {
  BoxGrid box;
  ComplexVector values;
};

/// Second-order central finite-difference application of P on the interior
/// of the box. Coefficients are looked up at fractional coordinates by
/// trigonometric interpolation. The result lives on the interior box.
BoxFunction apply_on_box(const PeriodicCoefficients& coeffs, const BoxFunction& samples);

}  // namespace floquet
