// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/fourier.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace floquet {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kTieEps = 1e-9;

struct Alias {
  double lower;  // alias used when there is no tie
  bool tie;
  double upper;  // second alias when tied
};

Alias alias_for(int q, int n, double shift) {
  const double half = 0.5 * n;
  double m = q - n * std::floor((q + shift + half) / n);
  const double v = m + shift + half;  // in [0, n)
  if (v <= kTieEps) return {m, true, m + n};
  if (v >= n - kTieEps) return {m - n, true, m};
  return {m, false, m};
}

// In-place 1D transforms along one axis of a grid-ordered vector.
void transform_axis(const TorusGrid& grid, ComplexVector& data, int axis, bool inverse) {
  Eigen::FFT<double> fft;
  const int n1 = grid.size(0);
  const int n2 = grid.dimension() == 2 ? grid.size(1) : 1;
  const int len = grid.size(axis);
  std::vector<cd> in(static_cast<std::size_t>(len)), out;
  const int lines = axis == 0 ? n2 : n1;
  for (int line = 0; line < lines; ++line) {
    for (int j = 0; j < len; ++j) {
      const auto idx = axis == 0 ? grid.flat_index(j, line) : grid.flat_index(line, j);
      in[static_cast<std::size_t>(j)] = data[static_cast<Eigen::Index>(idx)];
    }
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    for (int j = 0; j < len; ++j) {
      const auto idx = axis == 0 ? grid.flat_index(j, line) : grid.flat_index(line, j);
      data[static_cast<Eigen::Index>(idx)] = out[static_cast<std::size_t>(j)];
    }
  }
}

ComplexVector axis_basis(int n, double x) {
  ComplexVector e(n);
  for (int q = 0; q < n; ++q) {
    const Alias a = alias_for(q, n, 0.0);
    if (a.tie) {
      e[q] = 0.5 * (std::exp(kI * kTwoPi * a.lower * x) + std::exp(kI * kTwoPi * a.upper * x));
    } else {
      e[q] = std::exp(kI * kTwoPi * a.lower * x);
    }
  }
  return e;
}

}  // namespace

AxisSymbols axis_symbols(int n, std::complex<double> k) {
  AxisSymbols s{ComplexVector(n), ComplexVector(n)};
  const double shift = k.real() / kTwoPi;
  for (int q = 0; q < n; ++q) {
    const Alias a = alias_for(q, n, shift);
    const cd lo = kI * (kTwoPi * a.lower + k);
    if (a.tie) {
      const cd hi = kI * (kTwoPi * a.upper + k);
      s.first[q] = 0.5 * (lo + hi);
      s.second[q] = 0.5 * (lo * lo + hi * hi);
    } else {
      s.first[q] = lo;
      s.second[q] = lo * lo;
    }
  }
  return s;
}

Eigen::MatrixXcd circulant(const ComplexVector& symbol) {
  const auto n = symbol.size();
  ComplexVector column(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    cd sum = 0.0;
    for (Eigen::Index q = 0; q < n; ++q) {
      const auto phase = static_cast<double>((q * d) % n) / static_cast<double>(n);
      sum += symbol[q] * std::exp(kI * kTwoPi * phase);
    }
    column[d] = sum / static_cast<double>(n);
  }
  Eigen::MatrixXcd t(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) t(j, l) = column[((j - l) % n + n) % n];
  }
  return t;
}

ComplexVector dft(const TorusGrid& grid, const ComplexVector& values) {
  ComplexVector out = values;
  for (int axis = 0; axis < grid.dimension(); ++axis) transform_axis(grid, out, axis, false);
  return out;
}

ComplexVector idft(const TorusGrid& grid, const ComplexVector& coefficients) {
  ComplexVector out = coefficients;
  for (int axis = 0; axis < grid.dimension(); ++axis) transform_axis(grid, out, axis, true);
  return out;
}

RealVector spectral_derivative(const TorusGrid& grid, const RealVector& f, std::array<int, 2> orders) {
  ComplexVector hat = dft(grid, f.cast<cd>());
  std::vector<ComplexVector> factors;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const int order = orders[static_cast<std::size_t>(axis)];
    const AxisSymbols s = axis_symbols(grid.size(axis), 0.0);
    if (order == 0) {
      factors.push_back(ComplexVector::Ones(grid.size(axis)));
    } else if (order == 1) {
      factors.push_back(s.first);
    } else {
      factors.push_back(s.second);
    }
  }
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx) {
    const auto q = grid.multi_index(idx);
    cd m = 1.0;
    for (int axis = 0; axis < grid.dimension(); ++axis) m *= factors[static_cast<std::size_t>(axis)][q[static_cast<std::size_t>(axis)]];
    hat[static_cast<Eigen::Index>(idx)] *= m;
  }
  return idft(grid, hat).real();
}

double fourier_tail(const TorusGrid& grid, const RealVector& f) {
  const ComplexVector hat = dft(grid, f.cast<cd>());
  double all = 0.0;
  double tail = 0.0;
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx) {
    const auto q = grid.multi_index(idx);
    bool high = false;
    for (int axis = 0; axis < grid.dimension(); ++axis) {
      const int n = grid.size(axis);
      const int qa = q[static_cast<std::size_t>(axis)];
      const int m = qa <= n / 2 ? qa : n - qa;
      if (4 * m > n) high = true;
    }
    const double amp = std::abs(hat[static_cast<Eigen::Index>(idx)]);
    all = std::max(all, amp);
    if (high) tail = std::max(tail, amp);
  }
  return all == 0.0 ? 0.0 : tail / all;
}

TrigInterpolant::TrigInterpolant(const TorusGrid& grid, const ComplexVector& values)
    : grid_(std::make_shared<const TorusGrid>(grid)),
      coefficients_(dft(grid, values) / static_cast<double>(grid.node_count())) {}

TrigInterpolant::TrigInterpolant(const TorusGrid& grid, const RealVector& values)
    : TrigInterpolant(grid, ComplexVector(values.cast<cd>())) {}

std::complex<double> TrigInterpolant::operator()(const RealVector& x) const {
  const TorusGrid& g = *grid_;
  const ComplexVector e1 = axis_basis(g.size(0), x[0] - std::floor(x[0]));
  if (g.dimension() == 1) return (coefficients_.array() * e1.array()).sum();
  const ComplexVector e2 = axis_basis(g.size(1), x[1] - std::floor(x[1]));
  cd sum = 0.0;
  for (int q2 = 0; q2 < g.size(1); ++q2) {
    cd row = 0.0;
    for (int q1 = 0; q1 < g.size(0); ++q1) row += coefficients_[static_cast<Eigen::Index>(g.flat_index(q1, q2))] * e1[q1];
    sum += row * e2[q2];
  }
  return sum;
}

}  // namespace floquet
