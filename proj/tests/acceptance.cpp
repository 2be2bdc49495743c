// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Tolerances are fixed here on purpose.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <fmt/core.h>

#include "fixtures.hpp"
#include "floquet/bloch.hpp"
#include "floquet/floquet_transform.hpp"
#include "floquet/fourier.hpp"
#include "oracles.hpp"

using namespace floquet;
using cd = std::complex<double>;

namespace {

RealVector v2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

RealVector v1(double a) { return RealVector::Constant(1, a); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome closed_form() {
  Eigen::Matrix2d a;
  a << 1.3, 0.2, 0.2, 0.8;
  const Eigen::Vector2d b(0.4, -0.3);
  const double c = 0.7;
  const auto start = std::chrono::steady_clock::now();
  const PeriodicCoefficients p = fixtures::constant_2d(a, b, c, 16);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const Eigen::Vector2d xi(u(rng), u(rng));
    const double exact = -xi.dot(a * xi) + b.dot(xi) + c;
    worst = std::max(worst, std::abs(lambda_at(p, xi).lambda - exact));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && seconds < 5.0, fmt::format("max error {:.3e}, {:.2f} s at grid 16x16", worst, seconds)};
}

Outcome duality() {
  const PeriodicCoefficients p = fixtures::mathieu(32, true);
  const PeriodicCoefficients adj = formal_adjoint(p).coefficients;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double xi = -1.8 + 0.4 * i;
    worst = std::max(worst, std::abs(lambda_at(adj, v1(xi)).lambda - lambda_at(p, v1(-xi)).lambda));
  }
  return {worst <= 1e-8, fmt::format("max |Λ*(ξ) - Λ(-ξ)| {:.3e} over 10 ξ", worst)};
}

Outcome concavity() {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst_gap = -1e300;
  for (int i = 0; i < 20; ++i) {
    const RealVector x = v2(u(rng), u(rng)), y = v2(u(rng), u(rng));
    const double mid = lambda_at(p, 0.5 * (x + y)).lambda;
    const double avg = 0.5 * (lambda_at(p, x).lambda + lambda_at(p, y).lambda);
    worst_gap = std::max(worst_gap, avg - mid);
  }
  const LambdaMaximum max = maximize_lambda(p);
  double top = lambda_hessian(p, max.xi_star).eigenvalues.maxCoeff();
  const XiSurface s = trace_xi(p, max, 24);
  for (const XiNode& n : s.nodes) top = std::max(top, lambda_hessian(p, n.xi).eigenvalues.maxCoeff());
  return {worst_gap <= 1e-9 && top <= -1e-6,
          fmt::format("max midpoint excess {:.3e}, max Hessian eigenvalue {:.4f}", worst_gap, top)};
}

Outcome geometry() {
  const XiSurface circle = trace_xi(fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 1.0), 64);
  double radius_err = 0.0;
  for (const XiNode& n : circle.nodes) radius_err = std::max(radius_err, std::abs(n.xi.norm() - 1.0));

  Eigen::Matrix2d a;
  a << 1.0, 0.0, 0.0, 4.0;
  const IndicatorFn h(trace_xi(fixtures::constant_2d(a, Eigen::Vector2d::Zero(), 1.0), 8192));
  double support_err = 0.0;
  for (int j = 0; j < 32; ++j) {
    const double t = kTwoPi * j / 32 + 0.05;
    const RealVector w = v2(std::cos(t), std::sin(t));
    support_err = std::max(support_err, std::abs(h(w) - std::sqrt(w[0] * w[0] + w[1] * w[1] / 4)));
  }

  const XiSurface drift = trace_xi(fixtures::constant_1d(1.0, 1.0, 0.0), 2);
  double drift_err = 0.0;
  for (const XiNode& n : drift.nodes) drift_err = std::max(drift_err, std::min(std::abs(n.xi[0]), std::abs(n.xi[0] - 1.0)));
  const bool both = drift.nodes.size() == 2 && std::abs(drift.nodes[0].xi[0] - drift.nodes[1].xi[0]) > 0.5;

  return {radius_err <= 1e-6 && support_err <= 1e-6 && drift_err <= 1e-10 && both,
          fmt::format("circle radius {:.2e}, ellipse support {:.2e}, 1D {{0,1}} {:.2e}", radius_err, support_err,
                      drift_err)};
}

Outcome sign_criteria() {
  const SignReport div = lambda0_sign_report(fixtures::divergence_form(32));
  const double div_gamma = div.gamma ? std::abs((*div.gamma)[0]) : 1e300;
  const double b0 = 0.8;
  const SignReport drift = lambda0_sign_report(fixtures::constant_1d(1.0, b0, 0.0));
  const double lam_err = std::abs(drift.lambda0 - b0 * b0 / 4);
  const double int_err = drift.drift_integral ? std::abs((*drift.drift_integral)[0] - b0) : 1e300;
  const bool pass = std::abs(div.lambda0) <= 1e-7 && div_gamma <= 1e-7 && lam_err <= 1e-8 && int_err <= 1e-8;
  return {pass, fmt::format("divergence |Λ0| {:.2e} |γ| {:.2e}; drift Λ0 err {:.2e} ∫bψ err {:.2e}",
                            std::abs(div.lambda0), div_gamma, lam_err, int_err)};
}

Outcome plancherel() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> lat(-4, 4);
  double defect = 0.0, roundtrip = 0.0;
  for (int t = 0; t < 20; ++t) {
    const TorusGrid grid = t % 2 ? TorusGrid(1, {16}) : TorusGrid(2, {6, 6});
    CellField f{grid, {}};
    for (int c = 0; c < 5; ++c) {
      ComplexVector v(static_cast<Eigen::Index>(grid.node_count()));
      for (auto& x : v) x = cd{g(rng), g(rng)};
      f.cells[{lat(rng), grid.dimension() == 2 ? lat(rng) : 0}] = v;
    }
    defect = std::max(defect, plancherel_check(f).relative_defect());
    const CellField back = floquet_inverse(floquet_forward(f, minimal_counts(f)));
    double num = 0.0, den = 0.0;
    for (const auto& [cell, values] : f.cells) {
      const auto it = back.cells.find(cell);
      const ComplexVector diff = it == back.cells.end() ? ComplexVector(values) : ComplexVector(it->second - values);
      num += diff.squaredNorm();
      den += values.squaredNorm();
    }
    roundtrip = std::max(roundtrip, std::sqrt(num / den));
    if (back.cells.size() != f.cells.size()) roundtrip = 1.0;
  }
  return {defect <= 1e-12 && roundtrip <= 1e-12,
          fmt::format("isometry defect {:.2e}, round trip {:.2e} over 20 fields", defect, roundtrip)};
}

BlochFamily family_of(std::shared_ptr<const PeriodicCoefficients> p, int nodes) {
  XiSurface s = trace_xi(*p, nodes);
  return BlochFamily(std::move(p), std::move(s));
}

SynthesizedSolution solution(const BlochFamily& fam, MeasureSpec spec) {
  return synthesize(fam, make_measure(spec, fam.surface()));
}

Outcome representation() {
  const auto var = fixtures::share(fixtures::variable_2d(12));
  const BlochFamily fam = family_of(var, 16);
  MeasureSpec point;
  point.atoms = {{fam.node(5).param, 1.0, 0}};
  const SynthesizedSolution up = solution(fam, point);
  double point_err = 0.0;
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const cd e = bloch_eval(fam.node(5), v2(i + 0.3, j - 0.1)).value();
      point_err = std::max(point_err, std::abs(up(v2(i + 0.3, j - 0.1)) - e) / std::abs(e));
    }
  }

  const auto helm = fixtures::share(fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 1.0));
  const BlochFamily circle = family_of(helm, 64);
  MeasureSpec uniform;
  uniform.density = {1.0};
  const SynthesizedSolution ub = solution(circle, uniform);
  double bessel_err = 0.0;
  for (double r = 0.0; r <= 5.0; r += 0.25) {
    for (double t : {0.0, 0.4, 1.3, 2.9, 4.4}) {
      const double e = kTwoPi * oracle::bessel_i0(r);
      bessel_err = std::max(bessel_err, std::abs(ub(r * v2(std::cos(t), std::sin(t))) - e) / e);
    }
  }

  const double r1 = residual_norm(*helm, ub, v2(-1, -1), v2(1, 1), 0.1);
  const double r2 = residual_norm(*helm, ub, v2(-1, -1), v2(1, 1), 0.05);
  const double ratio = r1 / r2;
  return {point_err <= 1e-10 && bessel_err <= 1e-8 && ratio >= 3.5 && ratio <= 4.5,
          fmt::format("point mass {:.2e}, Bessel {:.2e}, residual ratio {:.3f}", point_err, bessel_err, ratio)};
}

Outcome envelope() {
  const auto helm = fixtures::share(fixtures::constant_2d(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 1.0));
  const BlochFamily fam = family_of(helm, 64);
  const IndicatorFn h(fam.surface());
  std::vector<double> radii;
  for (int i = 1; i <= 50; ++i) radii.push_back(i);

  const double theta = fam.node(8).param;
  MeasureSpec point;
  point.atoms = {{theta, 1.0, 0}};
  MeasureSpec first;
  first.atoms = {{theta, 1.0, 1}};
  MeasureSpec uniform;
  uniform.density = {1.0};
  // The derivative atom vanishes identically along its own normal, so the
  // ray is turned by a quarter node spacing.
  const double off = theta + fam.spacing() / 4;
  const EnvelopeRay rp = envelope_fit_ray(solution(fam, point), h, v2(std::cos(theta), std::sin(theta)), radii);
  const EnvelopeRay r1 = envelope_fit_ray(solution(fam, first), h, v2(std::cos(off), std::sin(off)), radii);
  const EnvelopeRay ru = envelope_fit_ray(solution(fam, uniform), h, v2(std::cos(0.3), std::sin(0.3)), radii);

  const bool bands = rp.n_fit >= -0.3 && rp.n_fit <= 0.3 && r1.n_fit >= 0.7 && r1.n_fit <= 1.3 && ru.n_fit >= -1.0 &&
                     ru.n_fit <= 0.3;
  const double excess = std::max({rp.max_excess, r1.max_excess, ru.max_excess});
  const bool skipped = rp.skipped || r1.skipped || ru.skipped;
  return {bands && excess <= 1e-9 && !skipped,
          fmt::format("N fit {:.3f} / {:.3f} / {:.3f}, max bound excess {:.2e}", rp.n_fit, r1.n_fit, ru.n_fit,
                      excess)};
}

Outcome completeness() {
  const auto p = fixtures::share(fixtures::mathieu(32, true));
  const BlochFamily fam = family_of(p, 2);
  const oracle::Ode1d ode{[](double) { return 1.0; }, [](double x) { return 0.3 + 0.2 * std::sin(kTwoPi * x); },
                          [](double x) { return 1.0 + 0.5 * std::cos(kTwoPi * x); }};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0, worst_rk4 = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double u0 = u(rng), du0 = u(rng);
    const CompletenessResult r = ode_completeness_1d(fam, u0, du0);
    worst = std::max(worst, r.max_mismatch);
    const double ref = oracle::rk4(ode, 0.0, {u0, du0}, 0.0, 5.0, 10000)[0];
    const double model = r.alpha * bloch_eval(fam.node(0), v1(5.0)).value().real() +
                         r.beta * bloch_eval(fam.node(1), v1(5.0)).value().real();
    worst_rk4 = std::max(worst_rk4, std::abs(model - ref) / std::max(1.0, std::abs(ref)));
  }
  return {worst <= 1e-6 && worst_rk4 <= 1e-6,
          fmt::format("adaptive mismatch {:.2e}, fixed-step cross-check {:.2e}", worst, worst_rk4)};
}

Outcome tube() {
  const PeriodicCoefficients p = fixtures::variable_2d(12);
  const TubeReport r = tube_exclusivity_check(p, trace_xi(p, 32), 200, 11, 1e-6);
  return {r.passed() && r.samples == 200,
          fmt::format("{} samples, {} excluded, min margin {:.3e}", r.samples, r.excluded, r.min_margin)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"constant-coefficient closed form", closed_form},
      {"adjoint duality", duality},
      {"concavity and Hessian", concavity},
      {"zero-set geometry", geometry},
      {"sign criteria for the maximum", sign_criteria},
      {"transform isometry", plancherel},
      {"synthesis representation", representation},
      {"growth envelope", envelope},
      {"1D completeness", completeness},
      {"tube exclusivity", tube},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.pass) ++failures;
    fmt::print("criterion {}: {} {} ({})\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
