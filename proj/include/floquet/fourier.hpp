// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <memory>

#include "floquet/grid.hpp"

namespace floquet {

/// Fourier-collocation symbols of (d/dx + i k) and (d/dx + i k)^2 along one
/// axis, indexed by DFT index q = 0..N-1.
///
/// Each DFT index is represented by the alias m (q mod N) for which
/// 2πm + Re k lies in [-πN, πN). When Re k is a multiple of 2π the end
/// points tie and the two aliases are averaged; this keeps the matrix real
/// for purely imaginary k and Hermitian for real k, and makes the symbol
/// set exactly covariant under k -> k + 2π.
struct AxisSymbols {
  ComplexVector first;
  ComplexVector second;
};

AxisSymbols axis_symbols(int n, std::complex<double> k);

/// The N x N circulant F^{-1} diag(symbol) F acting on grid samples.
Eigen::MatrixXcd circulant(const ComplexVector& symbol);

/// Unnormalized forward DFT over the grid (separable in 2D).
ComplexVector dft(const TorusGrid& grid, const ComplexVector& values);
/// Inverse of `dft` (includes the 1/node_count factor).
ComplexVector idft(const TorusGrid& grid, const ComplexVector& coefficients);

/// Trigonometric derivative of a real periodic grid function. `orders`
/// holds the derivative order (0, 1 or 2) per axis.
RealVector spectral_derivative(const TorusGrid& grid, const RealVector& f, std::array<int, 2> orders);

/// Largest Fourier amplitude among modes with |m_l| > N_l/4 on some axis,
/// relative to the largest amplitude overall. 0 for the zero function.
double fourier_tail(const TorusGrid& grid, const RealVector& f);

/// Trigonometric interpolant of grid samples, evaluated at arbitrary points
/// of R^n (periodically). Exact for every mode the grid resolves.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  TrigInterpolant(const TorusGrid& grid, const ComplexVector& values);
  TrigInterpolant(const TorusGrid& grid, const RealVector& values);

  std::complex<double> operator()(const RealVector& x) const;
  const TorusGrid& grid() const { return *grid_; }

 private:
  std::shared_ptr<const TorusGrid> grid_;
  ComplexVector coefficients_;
};

}  // namespace floquet
