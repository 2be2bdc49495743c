// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "floquet/coefficients.hpp"

namespace fixtures {

using namespace floquet;

inline FieldSpec expr(const std::string& s, int dim) { return FieldSpec{parse_expr(s, dim)}; }

/// -u'' + (1 + 0.5 cos 2πx) u, optionally with drift 0.3 + 0.2 sin 2πx.
inline PeriodicCoefficients mathieu(int n = 32, bool drift = false) {
  CoefficientSpec s;
  s.a = {{FieldSpec{1.0}}};
  if (drift) s.b = {expr("0.3 + 0.2*sin(2*pi*x1)", 1)};
  s.c = expr("1 + 0.5*cos(2*pi*x1)", 1);
  return make_coefficients(s, TorusGrid(1, {n}));
}

/// -(a u')' with a = 1 + 0.2 cos 2πx, written as -a u'' - a' u'.
inline PeriodicCoefficients divergence_form(int n = 32) {
  CoefficientSpec s;
  s.a = {{expr("1 + 0.2*cos(2*pi*x1)", 1)}};
  s.b = {expr("0.4*pi*sin(2*pi*x1)", 1)};
  s.c = 0.0;
  return make_coefficients(s, TorusGrid(1, {n}));
}

/// Constant 1D operator -a u'' + b u' + c u.
inline PeriodicCoefficients constant_1d(double a, double b, double c, int n = 8) {
  return PeriodicCoefficients::constant(TorusGrid(1, {n}), Eigen::MatrixXd::Constant(1, 1, a),
                                        RealVector::Constant(1, b), c);
}

/// Constant 2D operator with matrix A, drift b and potential c.
inline PeriodicCoefficients constant_2d(const Eigen::Matrix2d& a, const Eigen::Vector2d& b, double c, int n = 4) {
  return PeriodicCoefficients::constant(TorusGrid(2, {n, n}), a, b, c);
}

/// A 2D operator with variable coefficients in every slot.
inline PeriodicCoefficients variable_2d(int n = 12) {
  CoefficientSpec s;
  s.a = {{expr("1 + 0.2*cos(2*pi*x1)", 2), FieldSpec{0.1}},
         {FieldSpec{0.1}, expr("1.2 + 0.1*sin(2*pi*x2)", 2)}};
  s.b = {expr("0.2 + 0.1*cos(2*pi*x2)", 2), FieldSpec{-0.1}};
  s.c = expr("1 + 0.3*cos(2*pi*(x1 + x2))", 2);
  return make_coefficients(s, TorusGrid(2, {n, n}));
}

inline std::shared_ptr<const PeriodicCoefficients> share(PeriodicCoefficients c) {
  return std::make_shared<const PeriodicCoefficients>(std::move(c));
}

}  // namespace fixtures
