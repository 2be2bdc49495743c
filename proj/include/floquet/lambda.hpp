// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floquet/spectral.hpp"

namespace floquet {

/// Λ(ξ): the eigenvalue of P(ξ) = e^{-ξ·x} P e^{ξ·x} on the torus that has a
/// positive eigenfunction.
struct LambdaSample {
  RealVector xi;
  double lambda = 0.0;
  PrincipalEigenpair pair;
};

LambdaSample lambda_at(const PeriodicCoefficients& coeffs, const RealVector& xi);

/// ∇Λ by eigenvalue perturbation: component l is <psi, ∂_{ξ_l}P(ξ) p> with
/// ∂_{ξ_l}P(ξ) = -2 Σ_j a_lj (∂_j + ξ_j) + b_l.
RealVector lambda_gradient(const PeriodicCoefficients& coeffs, const LambdaSample& sample);
RealVector lambda_gradient(const PeriodicCoefficients& coeffs, const RealVector& xi);

struct HessianResult {
  Eigen::MatrixXd hessian;
  RealVector eigenvalues;  // ascending
};

/// Central differences of the analytic gradient, symmetrized.
HessianResult lambda_hessian(const PeriodicCoefficients& coeffs, const RealVector& xi, double step = 1e-4);

struct LambdaMaximum {
  double lambda0 = 0.0;
  RealVector xi_star;
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// Damped Newton ascent on the concave Λ until ‖∇Λ‖ <= 1e-10.
LambdaMaximum maximize_lambda(const PeriodicCoefficients& coeffs, const std::optional<RealVector>& start = {});

struct XiNode {
  double param = 0.0;  // ±1 in 1D, angle in [0, 2π) in 2D
  RealVector xi;
  double radius = 0.0;
  double lambda_residual = 0.0;  // |Λ(xi)|
  PrincipalEigenpair pair;
};

/// Sampled zero set Ξ = {Λ = 0}, parametrized radially about the maximizer.
struct XiSurface {
  int dimension = 0;
  RealVector center;
  double lambda0 = 0.0;
  std::vector<XiNode> nodes;
  /// Indices of the extreme points of conv(nodes); counter-clockwise in 2D.
  std::vector<std::size_t> hull;

  /// Consecutive cross products of the node polygon all share one sign (2D);
  /// always true in 1D.
  bool is_convex() const;
};

struct TraceOptions {
  double positivity_tol = 1e-8;
};

/// Throws HypothesisViolation when Λ₀ <= positivity_tol.
XiSurface trace_xi(const PeriodicCoefficients& coeffs, int node_count, const TraceOptions& options = {});
XiSurface trace_xi(const PeriodicCoefficients& coeffs, const LambdaMaximum& maximum, int node_count,
                   const TraceOptions& options = {});

struct RadialRoot {
  double radius = 0.0;
  LambdaSample sample;
};

/// Root of r -> Λ(center + r ω) for r > 0, bracketed and polished by
/// safeguarded Newton steps. Requires Λ(center) > 0.
RadialRoot solve_radius(const PeriodicCoefficients& coeffs, const RealVector& center, const RealVector& omega,
                        double guess, double max_radius);

/// Support function of conv(Ξ): h(ω) = max over hull vertices of ω·ξ.
class IndicatorFn {
 public:
  explicit IndicatorFn(const XiSurface& surface);

  /// Throws InvalidInput unless |ω| = 1 within 1e-12.
  double operator()(const RealVector& omega) const;
  const std::vector<RealVector>& vertices() const { return vertices_; }

 private:
  std::vector<RealVector> vertices_;
};

double indicator(const XiSurface& surface, const RealVector& omega);

/// Sign criteria for Λ₀ evaluated numerically next to the computed Λ₀.
struct SignReport {
  double min_c = 0.0;
  bool c_nonnegative = false;
  std::string c_claim;
  bool c_identically_zero = false;
  /// ∫ b ψ with ψ the principal eigenfunction of P* (only when c ≡ 0).
  std::optional<RealVector> drift_integral;
  /// γ_i = ∫ b̃_i ψ evaluated at `gamma_xi` (needs Λ₀ >= 0).
  std::optional<RealVector> gamma;
  std::optional<RealVector> gamma_xi;
  double lambda0 = 0.0;
  RealVector xi_star;
  bool lambda0_zero = false;
  std::optional<bool> drift_criterion_consistent;
  std::optional<bool> gamma_criterion_consistent;
};

SignReport lambda0_sign_report(const PeriodicCoefficients& coeffs, double zero_tol = 1e-7);

/// min |eigenvalue| of P(x, D + β - iξ).
double tube_margin(const PeriodicCoefficients& coeffs, const RealVector& beta, const RealVector& xi);

struct TubeSample {
  RealVector beta;
  RealVector xi;
  double margin = 0.0;
};

struct TubeReport {
  int samples = 0;
  int excluded = 0;
  double min_margin = 0.0;
  std::vector<TubeSample> violations;
  bool passed() const { return violations.empty(); }
};

/// Random (β, ξ) with β in the Brillouin zone and ξ inside conv(Ξ). Points
/// with β within 1e-3 of the reciprocal lattice and |Λ(ξ)| <= 1e-6 are
/// excluded; every other sample must keep its margin above `margin_floor`.
TubeReport tube_exclusivity_check(const PeriodicCoefficients& coeffs, const XiSurface& surface, int samples,
                                  std::uint64_t seed = 0, double margin_floor = 1e-6);

}  // namespace floquet
