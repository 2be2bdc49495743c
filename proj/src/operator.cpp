// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/operator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/fourier.hpp"

namespace floquet {

namespace {

using cd = std::complex<double>;

double matrix_scale(const Eigen::MatrixXcd& m) { return 1.0 + m.cwiseAbs().maxCoeff(); }

}  // namespace

bool AssembledOperator::is_real() const {
  return matrix.imag().cwiseAbs().maxCoeff() <= 1e-12 * matrix_scale(matrix);
}

Eigen::MatrixXd AssembledOperator::real_matrix() const {
  if (!is_real()) throw InvalidInput("operator matrix is not real");
  return matrix.real();
}

ComplexVector imaginary_quasimomentum(const RealVector& xi) { return xi.cast<cd>() * cd(0.0, -1.0); }

AssembledOperator assemble(const std::shared_ptr<const PeriodicCoefficients>& coeffs, const ComplexVector& k) {
  const PeriodicCoefficients& pc = *coeffs;
  const TorusGrid& grid = pc.grid();
  const int n = grid.dimension();
  if (k.size() != n) throw InvalidInput(fmt::format("quasimomentum needs {} components", n));

  std::vector<Eigen::MatrixXcd> first, second;
  for (int l = 0; l < n; ++l) {
    const AxisSymbols s = axis_symbols(grid.size(l), k[l]);
    first.push_back(circulant(s.first));
    second.push_back(circulant(s.second));
  }

  const auto count = static_cast<Eigen::Index>(grid.node_count());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(count, count);
  if (n == 1) {
    for (Eigen::Index r = 0; r < count; ++r) {
      m.row(r) = -pc.a(0, 0)[r] * second[0].row(r) + pc.b(0)[r] * first[0].row(r);
      m(r, r) += pc.c()[r];
    }
  } else {
    const int n1 = grid.size(0);
    const int n2 = grid.size(1);
    for (Eigen::Index r = 0; r < count; ++r) {
      const auto jr = grid.multi_index(static_cast<std::size_t>(r));
      const double a11 = pc.a(0, 0)[r];
      const double a22 = pc.a(1, 1)[r];
      const double a12 = 0.5 * (pc.a(0, 1)[r] + pc.a(1, 0)[r]);
      const double b1 = pc.b(0)[r];
      const double b2 = pc.b(1)[r];
      for (int l2 = 0; l2 < n2; ++l2) {
        for (int l1 = 0; l1 < n1; ++l1) {
          const auto col = static_cast<Eigen::Index>(grid.flat_index(l1, l2));
          const bool same1 = jr[0] == l1;
          const bool same2 = jr[1] == l2;
          const cd d1 = first[0](jr[0], l1);
          const cd d2 = first[1](jr[1], l2);
          cd v = -2.0 * a12 * d1 * d2;
          if (same2) v += -a11 * second[0](jr[0], l1) + b1 * d1;
          if (same1) v += -a22 * second[1](jr[1], l2) + b2 * d2;
          if (same1 && same2) v += pc.c()[r];
          m(r, col) = v;
        }
      }
    }
  }
  return {k, std::move(m), coeffs};
}

AssembledOperator assemble(const PeriodicCoefficients& coeffs, const ComplexVector& k) {
  return assemble(std::make_shared<const PeriodicCoefficients>(coeffs), k);
}

ComplexVector apply_shifted_derivative(const TorusGrid& grid, const ComplexVector& k, int axis,
                                       const ComplexVector& values) {
  const AxisSymbols s = axis_symbols(grid.size(axis), k[axis]);
  ComplexVector hat = dft(grid, values);
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx) {
    const auto q = grid.multi_index(idx);
    hat[static_cast<Eigen::Index>(idx)] *= s.first[q[static_cast<std::size_t>(axis)]];
  }
  return idft(grid, hat);
}

std::size_t BoxGrid::node_count() const {
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  return total;
}

RealVector BoxGrid::node(std::size_t index) const {
  RealVector x(lo.size());
  for (Eigen::Index l = 0; l < lo.size(); ++l) {
    const auto c = static_cast<std::size_t>(counts[static_cast<std::size_t>(l)]);
    x[l] = lo[l] + spacing * static_cast<double>(index % c);
    index /= c;
  }
  return x;
}

BoxGrid make_box(const RealVector& lo, const RealVector& hi, double spacing) {
  if (!(spacing > 0.0)) throw InvalidInput("box spacing must be positive");
  if (lo.size() != hi.size() || lo.size() < 1 || lo.size() > 2) throw InvalidInput("box corners must have 1 or 2 components");
  BoxGrid box{lo, spacing, {}};
  for (Eigen::Index l = 0; l < lo.size(); ++l) {
    if (!(hi[l] > lo[l])) throw InvalidInput("box must have hi > lo");
    box.counts.push_back(static_cast<int>(std::floor((hi[l] - lo[l]) / spacing + 1e-9)) + 1);
  }
  return box;
}

BoxFunction apply_on_box(const PeriodicCoefficients& coeffs, const BoxFunction& samples) {
  const BoxGrid& box = samples.box;
  const int n = coeffs.dimension();
  if (box.lo.size() != n || static_cast<int>(box.counts.size()) != n) {
    throw InvalidInput("box dimension does not match the operator");
  }
  if (box.spacing > 0.25) throw InvalidInput("box spacing must resolve the unit cell (at least 4 points per period)");
  for (int c : box.counts) {
    if (c < 3) throw InvalidInput("box too small for the finite-difference stencil");
  }
  if (samples.values.size() != static_cast<Eigen::Index>(box.node_count())) {
    throw InvalidInput("box samples do not match the box");
  }

  const TorusGrid& grid = coeffs.grid();
  const TrigInterpolant a11(grid, coeffs.a(0, 0));
  const TrigInterpolant b1(grid, coeffs.b(0));
  const TrigInterpolant c(grid, coeffs.c());
  TrigInterpolant a22, a12, b2;
  if (n == 2) {
    a22 = TrigInterpolant(grid, coeffs.a(1, 1));
    a12 = TrigInterpolant(grid, RealVector(0.5 * (coeffs.a(0, 1) + coeffs.a(1, 0))));
    b2 = TrigInterpolant(grid, coeffs.b(1));
  }

  BoxGrid inner{box.lo.array() + box.spacing, box.spacing, box.counts};
  for (int& cnt : inner.counts) cnt -= 2;
  BoxFunction out{inner, ComplexVector(static_cast<Eigen::Index>(inner.node_count()))};

  const double h = box.spacing;
  const int c1 = box.counts[0];
  auto at = [&](int i1, int i2) { return samples.values[i1 + c1 * i2]; };
  for (std::size_t idx = 0; idx < inner.node_count(); ++idx) {
    const RealVector x = inner.node(idx);
    const int i1 = static_cast<int>(idx % static_cast<std::size_t>(inner.counts[0])) + 1;
    const int i2 = n == 2 ? static_cast<int>(idx / static_cast<std::size_t>(inner.counts[0])) + 1 : 0;
    const cd u = at(i1, i2);
    const cd uxx = (at(i1 + 1, i2) - 2.0 * u + at(i1 - 1, i2)) / (h * h);
    const cd ux = (at(i1 + 1, i2) - at(i1 - 1, i2)) / (2.0 * h);
    cd value = -a11(x).real() * uxx + b1(x).real() * ux + c(x).real() * u;
    if (n == 2) {
      const cd uyy = (at(i1, i2 + 1) - 2.0 * u + at(i1, i2 - 1)) / (h * h);
      const cd uy = (at(i1, i2 + 1) - at(i1, i2 - 1)) / (2.0 * h);
      const cd uxy = (at(i1 + 1, i2 + 1) - at(i1 + 1, i2 - 1) - at(i1 - 1, i2 + 1) + at(i1 - 1, i2 - 1)) / (4.0 * h * h);
      value += -a22(x).real() * uyy - 2.0 * a12(x).real() * uxy + b2(x).real() * uy;
    }
    out.values[static_cast<Eigen::Index>(idx)] = value;
  }
  return out;
}

}  // namespace floquet
