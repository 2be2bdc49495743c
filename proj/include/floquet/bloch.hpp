// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "floquet/fourier.hpp"
#include "floquet/lambda.hpp"

namespace floquet {

/// mantissa * e^{exponent}; keeps values like e^{50 |ξ|} representable and
/// their logarithms exact.
struct ScaledComplex {
  std::complex<double> mantissa{0.0, 0.0};
  double exponent = 0.0;

  double log_abs() const { return std::log(std::abs(mantissa)) + exponent; }
  std::complex<double> value() const { return mantissa * std::exp(exponent); }
};

/// One positive Bloch solution u(x) = e^{ξ·x} p(x).
struct BlochMember {
  double param = 0.0;
  RealVector xi;
  RealVector p;  // grid samples, mean 1
  TrigInterpolant interpolant;
};

BlochMember make_member(const TorusGrid& grid, const LambdaSample& sample, double param = 0.0);

ScaledComplex bloch_eval(const BlochMember& member, const RealVector& x);
std::vector<ScaledComplex> bloch_eval(const BlochMember& member, const std::vector<RealVector>& points);

/// The positive Bloch solutions along a traced Ξ, parametrized by the node
/// parameter (±1 in 1D, angle in 2D).
class BlochFamily {
 public:
  BlochFamily(std::shared_ptr<const PeriodicCoefficients> coeffs, XiSurface surface);

  const PeriodicCoefficients& coefficients() const { return *coeffs_; }
  const XiSurface& surface() const { return surface_; }
  int dimension() const { return surface_.dimension; }
  const BlochMember& node(std::size_t i) const { return members_[i]; }
  std::size_t size() const { return members_.size(); }

  /// Angular node spacing 2π/M (0 in 1D).
  double spacing() const;
  /// max adjacent ‖p_{i+1} - p_i‖ / Δs over the closed node loop (0 in 1D).
  double continuity_constant() const { return continuity_; }
  bool under_resolved() const { return continuity_ * spacing() > 0.5; }

  /// Member at parameter s. Node parameters return the stored node; other
  /// angles are re-solved on the ray from the center (2D only).
  BlochMember member_at(double s) const;

 private:
  std::shared_ptr<const PeriodicCoefficients> coeffs_;
  XiSurface surface_;
  std::vector<BlochMember> members_;
  double continuity_ = 0.0;
};

/// A finite combination Σ w_t u_t of Bloch solutions.
class SynthesizedSolution {
 public:
  struct Term {
    std::complex<double> weight;
    std::shared_ptr<const BlochMember> member;
  };

  SynthesizedSolution() = default;
  SynthesizedSolution(std::vector<Term> terms, int order);

  ScaledComplex eval_scaled(const RealVector& x) const;
  std::vector<ScaledComplex> evaluate(const std::vector<RealVector>& points) const;
  std::complex<double> operator()(const RealVector& x) const { return eval_scaled(x).value(); }

  /// Declared order N of the generating distribution.
  int order() const { return order_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  int order_ = 0;
};

/// d^m/ds^m u_{ξ(s)} at s0 as a combination of Bloch solutions: central
/// second-order differences with step h and h/2 combined by Richardson
/// extrapolation. m = 0 is the member at s0 itself.
SynthesizedSolution derivative_atom(const BlochFamily& family, double s0, int order);

std::vector<ScaledComplex> derivative_atom_eval(const BlochFamily& family, double s0, int order,
                                                const std::vector<RealVector>& points);

struct Atom {
  double s = 0.0;
  std::complex<double> weight{1.0, 0.0};
  int order = 0;
};

struct MeasureSpec {
  /// Per-node density, or a single value broadcast to every node.
  std::vector<std::complex<double>> density;
  std::vector<Atom> atoms;
};

/// Density part as quadrature weights per node (trapezoid in the angle in
/// 2D, counting measure in 1D) plus tangential-derivative atoms.
struct MeasureOnXi {
  std::vector<std::complex<double>> weights;
  std::vector<Atom> atoms;

  int order() const;
  std::complex<double> total_mass() const;
};

MeasureOnXi make_measure(const MeasureSpec& spec, const XiSurface& surface);

SynthesizedSolution synthesize(const BlochFamily& family, const MeasureOnXi& mu);

/// ‖P_h u‖ / ‖u‖ over the interior nodes of the box, with P_h the
/// second-order finite-difference operator.
double residual_norm(const PeriodicCoefficients& coeffs, const SynthesizedSolution& u, const RealVector& lo,
                     const RealVector& hi, double spacing);

struct EnvelopeRay {
  RealVector omega;
  double h = 0.0;          // indicator value on the ray
  double slope = 0.0;      // d log|u| / dr over the outer half of the radii
  double n_fit = 0.0;
  double c_fit = 0.0;      // log C
  double max_excess = 0.0; // max of log|u| - h r - (N_fit + 1/2) log(1+r) - C_fit
  bool skipped = false;    // u vanished at every radius
};

EnvelopeRay envelope_fit_ray(const SynthesizedSolution& u, const IndicatorFn& h, const RealVector& omega,
                             const std::vector<double>& radii);
std::vector<EnvelopeRay> envelope_fit(const SynthesizedSolution& u, const IndicatorFn& h,
                                      const std::vector<RealVector>& rays, const std::vector<double>& radii);

/// Re u > 0 and |Im u| <= 1e-10 |u| at every point. Only defined for
/// measures without derivative atoms.
bool positivity_check(const SynthesizedSolution& u, const std::vector<RealVector>& points);

struct CompletenessResult {
  double alpha = 0.0;
  double beta = 0.0;
  double max_mismatch = 0.0;
};

/// Integrates Pu = 0 from (u(0), u'(0)) on [0, 6], matches α u_{ξ-} + β u_{ξ+}
/// at x = 0 and 1 and reports the worst relative mismatch at x = 2..6.
CompletenessResult ode_completeness_1d(const BlochFamily& family, double u0, double du0);

}  // namespace floquet
