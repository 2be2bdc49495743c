// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/coefficients.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/fourier.hpp"

namespace floquet {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kImagTol = 1e-12;
constexpr double kTailThreshold = 1e-10;

double smallest_eigenvalue(const PeriodicCoefficients& pc, std::size_t node) {
  const auto i = static_cast<Eigen::Index>(node);
  if (pc.dimension() == 1) return pc.a(0, 0)[i];
  const double p = pc.a(0, 0)[i];
  const double q = pc.a(1, 1)[i];
  const double r = pc.a(0, 1)[i];
  return 0.5 * (p + q) - std::sqrt(0.25 * (p - q) * (p - q) + r * r);
}

bool all_finite(const RealVector& v) { return v.allFinite(); }

}  // namespace

PeriodicCoefficients::PeriodicCoefficients(TorusGrid grid, std::vector<std::vector<RealVector>> a,
                                           std::vector<RealVector> b, RealVector c)
    : grid_(std::move(grid)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), ellipticity_(0.0) {
  const int n = grid_.dimension();
  const auto count = static_cast<Eigen::Index>(grid_.node_count());
  if (static_cast<int>(a_.size()) != n || static_cast<int>(b_.size()) != n) {
    throw InvalidInput(fmt::format("coefficient shapes do not match dimension {}", n));
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a_[static_cast<std::size_t>(i)].size()) != n) throw InvalidInput("a must be n x n");
    for (int j = 0; j < n; ++j) {
      if (this->a(i, j).size() != count || !all_finite(this->a(i, j))) {
        throw InvalidInput("coefficient samples must be finite and match the grid");
      }
    }
    if (this->b(i).size() != count || !all_finite(this->b(i))) {
      throw InvalidInput("coefficient samples must be finite and match the grid");
    }
  }
  if (c_.size() != count || !all_finite(c_)) throw InvalidInput("coefficient samples must be finite and match the grid");
  if (n == 2) {
    const double scale = 1.0 + std::max(this->a(0, 1).cwiseAbs().maxCoeff(), this->a(1, 0).cwiseAbs().maxCoeff());
    if ((this->a(0, 1) - this->a(1, 0)).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
      throw InvalidInput("a must be symmetric");
    }
  }
  ellipticity_ = std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < grid_.node_count(); ++node) {
    ellipticity_ = std::min(ellipticity_, smallest_eigenvalue(*this, node));
  }
  if (!(ellipticity_ > 0.0)) {
    throw InvalidInput(fmt::format("not uniformly elliptic: min eigenvalue of a(x) is {}", ellipticity_));
  }
}

PeriodicCoefficients PeriodicCoefficients::constant(const TorusGrid& grid, const Eigen::MatrixXd& a,
                                                    const RealVector& b, double c) {
  const int n = grid.dimension();
  const auto count = static_cast<Eigen::Index>(grid.node_count());
  std::vector<std::vector<RealVector>> av(static_cast<std::size_t>(n));
  std::vector<RealVector> bv;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) av[static_cast<std::size_t>(i)].push_back(RealVector::Constant(count, a(i, j)));
    bv.push_back(RealVector::Constant(count, b.size() > i ? b[i] : 0.0));
  }
  return PeriodicCoefficients(grid, std::move(av), std::move(bv), RealVector::Constant(count, c));
}

PeriodicCoefficients PeriodicCoefficients::shifted(double t) const {
  return PeriodicCoefficients(grid_, a_, b_, (c_.array() + t).matrix());
}

PeriodicCoefficients PeriodicCoefficients::scaled(double s) const {
  if (!(s > 0.0)) throw InvalidInput("scale factor must be positive");
  auto a = a_;
  for (auto& row : a) {
    for (auto& f : row) f *= s;
  }
  auto b = b_;
  for (auto& f : b) f *= s;
  return PeriodicCoefficients(grid_, std::move(a), std::move(b), c_ * s);
}

PeriodicCoefficients PeriodicCoefficients::translated(const std::vector<int>& node_offsets) const {
  const int n = dimension();
  auto roll = [&](const RealVector& f) {
    RealVector out(f.size());
    for (std::size_t idx = 0; idx < grid_.node_count(); ++idx) {
      auto j = grid_.multi_index(idx);
      for (int l = 0; l < n; ++l) {
        const int size = grid_.size(l);
        const int off = l < static_cast<int>(node_offsets.size()) ? node_offsets[static_cast<std::size_t>(l)] : 0;
        j[static_cast<std::size_t>(l)] = ((j[static_cast<std::size_t>(l)] - off) % size + size) % size;
      }
      out[static_cast<Eigen::Index>(idx)] = f[static_cast<Eigen::Index>(grid_.flat_index(j[0], j[1]))];
    }
    return out;
  };
  auto a = a_;
  for (auto& row : a) {
    for (auto& f : row) f = roll(f);
  }
  auto b = b_;
  for (auto& f : b) f = roll(f);
  return PeriodicCoefficients(grid_, std::move(a), std::move(b), roll(c_));
}

RealVector sample_field(const FieldSpec& spec, const TorusGrid& grid) {
  const auto count = static_cast<Eigen::Index>(grid.node_count());
  if (const auto* value = std::get_if<double>(&spec)) {
    if (!std::isfinite(*value)) throw InvalidInput("coefficients must be finite");
    return RealVector::Constant(count, *value);
  }
  if (const auto* expr = std::get_if<Expression>(&spec)) {
    if (expr->max_variable() > grid.dimension()) {
      throw InvalidInput(fmt::format("expression '{}' references x{} in a {}D run", expr->source(),
                                     expr->max_variable(), grid.dimension()));
    }
    RealVector out(count);
    for (Eigen::Index i = 0; i < count; ++i) out[i] = expr->evaluate(grid.node(static_cast<std::size_t>(i)));
    return out;
  }
  const auto& terms = std::get<std::vector<FourierTerm>>(spec);
  ComplexVector acc = ComplexVector::Zero(count);
  for (const auto& t : terms) {
    if (static_cast<int>(t.mode.size()) != grid.dimension()) {
      throw InvalidInput(fmt::format("Fourier mode needs {} components", grid.dimension()));
    }
    for (Eigen::Index i = 0; i < count; ++i) {
      const RealVector x = grid.node(static_cast<std::size_t>(i));
      double phase = 0.0;
      for (int l = 0; l < grid.dimension(); ++l) phase += t.mode[static_cast<std::size_t>(l)] * x[l];
      acc[i] += t.coeff * std::exp(std::complex<double>(0.0, kTwoPi * phase));
    }
  }
  const double scale = 1.0 + acc.cwiseAbs().maxCoeff();
  if (acc.imag().cwiseAbs().maxCoeff() > kImagTol * scale) throw InvalidInput("coefficients must be real");
  return acc.real();
}

PeriodicCoefficients make_coefficients(const CoefficientSpec& spec, const TorusGrid& grid) {
  const int n = grid.dimension();
  if (static_cast<int>(spec.a.size()) != n) throw InvalidInput(fmt::format("a must be {} x {}", n, n));
  std::vector<std::vector<RealVector>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& row = spec.a[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != n) throw InvalidInput(fmt::format("a must be {} x {}", n, n));
    for (const auto& f : row) a[static_cast<std::size_t>(i)].push_back(sample_field(f, grid));
  }
  std::vector<RealVector> b;
  if (spec.b.empty()) {
    b.assign(static_cast<std::size_t>(n), RealVector::Zero(static_cast<Eigen::Index>(grid.node_count())));
  } else {
    if (static_cast<int>(spec.b.size()) != n) throw InvalidInput(fmt::format("b must have {} entries", n));
    for (const auto& f : spec.b) b.push_back(sample_field(f, grid));
  }
  return PeriodicCoefficients(grid, std::move(a), std::move(b), sample_field(spec.c, grid));
}

AdjointResult formal_adjoint(const PeriodicCoefficients& coeffs) {
  const TorusGrid& grid = coeffs.grid();
  const int n = coeffs.dimension();
  std::vector<std::string> warnings;
  for (int i = 0; i < n; ++i) {
    bool under = fourier_tail(grid, coeffs.b(i)) > kTailThreshold;
    for (int j = 0; j < n; ++j) under = under || fourier_tail(grid, coeffs.a(i, j)) > kTailThreshold;
    if (under) {
      warnings.emplace_back("adjoint coefficients under-resolved");
      break;
    }
  }

  auto order = [](int axis, int k) {
    std::array<int, 2> o{0, 0};
    o[static_cast<std::size_t>(axis)] += k;
    return o;
  };

  std::vector<RealVector> b_star;
  RealVector c_star = coeffs.c();
  for (int i = 0; i < n; ++i) {
    RealVector bi = -coeffs.b(i);
    for (int j = 0; j < n; ++j) bi -= 2.0 * spectral_derivative(grid, coeffs.a(i, j), order(j, 1));
    b_star.push_back(std::move(bi));
    c_star -= spectral_derivative(grid, coeffs.b(i), order(i, 1));
    for (int j = 0; j < n; ++j) {
      std::array<int, 2> o = order(i, 1);
      o[static_cast<std::size_t>(j)] += 1;
      c_star -= spectral_derivative(grid, coeffs.a(i, j), o);
    }
  }
  std::vector<std::vector<RealVector>> a;
  for (int i = 0; i < n; ++i) {
    a.emplace_back();
    for (int j = 0; j < n; ++j) a.back().push_back(coeffs.a(i, j));
  }
  return {PeriodicCoefficients(grid, std::move(a), std::move(b_star), std::move(c_star)), std::move(warnings)};
}

}  // namespace floquet
