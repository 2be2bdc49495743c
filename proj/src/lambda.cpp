// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/fourier.hpp"
#include "floquet/linalg.hpp"

namespace floquet {

namespace {

constexpr double kGradientTol = 1e-10;
constexpr double kGapForDerivatives = 1e-8;

double cross2(const RealVector& u, const RealVector& v) { return u[0] * v[1] - u[1] * v[0]; }

std::vector<std::size_t> convex_hull_2d(const std::vector<XiNode>& nodes) {
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const RealVector& p = nodes[i].xi;
    const RealVector& q = nodes[j].xi;
    return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
  });
  if (order.size() < 3) return order;
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return cross2(nodes[a].xi - nodes[o].xi, nodes[b].xi - nodes[o].xi);
  };
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

LambdaSample lambda_at(const PeriodicCoefficients& coeffs, const RealVector& xi) {
  if (xi.size() != coeffs.dimension()) throw InvalidInput("xi dimension does not match the operator");
  LambdaSample s;
  s.xi = xi;
  s.pair = principal_eigenpair(assemble(coeffs, imaginary_quasimomentum(xi)));
  s.lambda = s.pair.lambda;
  return s;
}

RealVector lambda_gradient(const PeriodicCoefficients& coeffs, const LambdaSample& sample) {
  if (sample.pair.gap < kGapForDerivatives) throw NumericalFailure("degenerate principal eigenvalue: gradient undefined");
  const TorusGrid& grid = coeffs.grid();
  const int n = coeffs.dimension();
  const ComplexVector k = imaginary_quasimomentum(sample.xi);
  const ComplexVector p = sample.pair.p.cast<std::complex<double>>();
  std::vector<RealVector> dp;
  for (int j = 0; j < n; ++j) dp.push_back(apply_shifted_derivative(grid, k, j, p).real());
  RealVector g(n);
  for (int l = 0; l < n; ++l) {
    RealVector v = coeffs.b(l).cwiseProduct(sample.pair.p);
    for (int j = 0; j < n; ++j) {
      const RealVector alj = 0.5 * (coeffs.a(l, j) + coeffs.a(j, l));
      v -= 2.0 * alj.cwiseProduct(dp[static_cast<std::size_t>(j)]);
    }
    g[l] = sample.pair.psi.cwiseProduct(v).mean();
  }
  return g;
}

RealVector lambda_gradient(const PeriodicCoefficients& coeffs, const RealVector& xi) {
  return lambda_gradient(coeffs, lambda_at(coeffs, xi));
}

HessianResult lambda_hessian(const PeriodicCoefficients& coeffs, const RealVector& xi, double step) {
  const int n = coeffs.dimension();
  Eigen::MatrixXd h(n, n);
  for (int j = 0; j < n; ++j) {
    RealVector plus = xi;
    RealVector minus = xi;
    plus[j] += step;
    minus[j] -= step;
    h.col(j) = (lambda_gradient(coeffs, plus) - lambda_gradient(coeffs, minus)) / (2.0 * step);
  }
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-3 * (1.0 + h.cwiseAbs().maxCoeff())) {
    throw NumericalFailure(fmt::format("Hessian step collapse: asymmetry {:.3e} (coefficients under-resolved?)", asym));
  }
  HessianResult out;
  out.hessian = 0.5 * (h + h.transpose());
  out.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.hessian).eigenvalues();
  return out;
}

LambdaMaximum maximize_lambda(const PeriodicCoefficients& coeffs, const std::optional<RealVector>& start) {
  const int n = coeffs.dimension();
  RealVector xi = start.value_or(RealVector::Zero(n));
  LambdaSample current = lambda_at(coeffs, xi);
  RealVector g = lambda_gradient(coeffs, current);
  int iter = 0;
  for (; iter < 60 && g.norm() > kGradientTol; ++iter) {
    const HessianResult h = lambda_hessian(coeffs, xi);
    RealVector direction;
    if (h.eigenvalues.maxCoeff() < 0.0) {
      direction = -h.hessian.ldlt().solve(g);
    } else {
      direction = g;  // ascent direction when the FD Hessian is not usable
    }
    bool accepted = false;
    const double slack = 1e-12 * (1.0 + std::abs(current.lambda));
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      LambdaSample trial = lambda_at(coeffs, xi + t * direction);
      if (trial.lambda >= current.lambda - slack) {
        xi = trial.xi;
        current = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NumericalFailure(fmt::format("non-ascent of Lambda at xi = [{}], |grad| = {:.3e}: concavity not resolved",
                                         fmt::join(xi, ", "), g.norm()));
    }
    g = lambda_gradient(coeffs, current);
  }
  if (g.norm() > 1e3 * kGradientTol) {
    throw NumericalFailure(fmt::format("maximize_lambda did not converge: |grad| = {:.3e}", g.norm()));
  }
  return {current.lambda, xi, g.norm(), iter};
}

RadialRoot solve_radius(const PeriodicCoefficients& coeffs, const RealVector& center, const RealVector& omega,
                        double guess, double max_radius) {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double r = std::clamp(guess > 0.0 ? guess : 1.0, 1e-6, max_radius);
  for (int iter = 0; iter < 200; ++iter) {
    LambdaSample s = lambda_at(coeffs, center + r * omega);
    const double f = s.lambda;
    if (f > 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    if (f == 0.0) return {r, std::move(s)};
    const double slope = lambda_gradient(coeffs, s).dot(omega);
    const double step = slope != 0.0 ? -f / slope : std::numeric_limits<double>::infinity();
    const double tol = 1e-13 * (1.0 + r);
    if (std::abs(step) <= tol || (std::isfinite(hi) && hi - lo <= tol)) return {r, std::move(s)};

    const double newton = r + step;
    double next;
    if (!std::isfinite(hi)) {
      if (r >= max_radius) {
        throw NumericalFailure(fmt::format("no sign change of Lambda along the ray within radius {}", max_radius));
      }
      next = (slope < 0.0 && std::isfinite(newton) && newton > r) ? newton : 2.0 * r;
      next = std::min(next, max_radius);
    } else {
      next = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    r = next;
  }
  throw NumericalFailure("radial root search did not converge");
}

XiSurface trace_xi(const PeriodicCoefficients& coeffs, int node_count, const TraceOptions& options) {
  return trace_xi(coeffs, maximize_lambda(coeffs), node_count, options);
}

XiSurface trace_xi(const PeriodicCoefficients& coeffs, const LambdaMaximum& maximum, int node_count,
                   const TraceOptions& options) {
  if (!(maximum.lambda0 > options.positivity_tol)) {
    throw HypothesisViolation(
        fmt::format("theorem hypothesis violated: Λ₀ must be positive (Λ₀ = {:.6e})", maximum.lambda0));
  }
  const int n = coeffs.dimension();
  XiSurface surface;
  surface.dimension = n;
  surface.center = maximum.xi_star;
  surface.lambda0 = maximum.lambda0;
  const double max_radius = 10.0 * (1.0 + maximum.xi_star.norm());

  std::vector<std::pair<double, RealVector>> rays;
  if (n == 1) {
    rays.emplace_back(-1.0, RealVector::Constant(1, -1.0));
    rays.emplace_back(1.0, RealVector::Constant(1, 1.0));
  } else {
    if (node_count < 3) throw InvalidInput("a 2D trace needs at least 3 nodes");
    for (int m = 0; m < node_count; ++m) {
      const double theta = kTwoPi * m / node_count;
      RealVector omega(2);
      omega << std::cos(theta), std::sin(theta);
      rays.emplace_back(theta, omega);
    }
  }

  double guess = 1.0;
  for (const auto& [param, omega] : rays) {
    RadialRoot root = solve_radius(coeffs, surface.center, omega, guess, max_radius);
    guess = root.radius;
    XiNode node;
    node.param = param;
    node.xi = root.sample.xi;
    node.radius = root.radius;
    node.lambda_residual = std::abs(root.sample.lambda);
    node.pair = std::move(root.sample.pair);
    surface.nodes.push_back(std::move(node));
  }

  if (n == 1) {
    surface.hull = {0, 1};
  } else {
    surface.hull = convex_hull_2d(surface.nodes);
  }
  return surface;
}

bool XiSurface::is_convex() const {
  if (dimension == 1) return true;
  const std::size_t m = nodes.size();
  int sign = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const RealVector& a = nodes[i].xi;
    const RealVector& b = nodes[(i + 1) % m].xi;
    const RealVector& c = nodes[(i + 2) % m].xi;
    const double cr = cross2(b - a, c - b);
    const int s = cr > 0.0 ? 1 : (cr < 0.0 ? -1 : 0);
    if (s == 0) return false;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

IndicatorFn::IndicatorFn(const XiSurface& surface) {
  for (std::size_t i : surface.hull) vertices_.push_back(surface.nodes[i].xi);
}

double IndicatorFn::operator()(const RealVector& omega) const {
  if (vertices_.empty()) throw InvalidInput("indicator of an empty surface");
  if (omega.size() != vertices_.front().size() || std::abs(omega.norm() - 1.0) > 1e-12) {
    throw InvalidInput("omega must be a unit vector");
  }
  double h = -std::numeric_limits<double>::infinity();
  for (const RealVector& v : vertices_) h = std::max(h, omega.dot(v));
  return h;
}

double indicator(const XiSurface& surface, const RealVector& omega) { return IndicatorFn(surface)(omega); }

SignReport lambda0_sign_report(const PeriodicCoefficients& coeffs, double zero_tol) {
  const int n = coeffs.dimension();
  const TorusGrid& grid = coeffs.grid();
  SignReport r;
  r.min_c = coeffs.c().minCoeff();
  r.c_nonnegative = r.min_c >= 0.0;
  r.c_claim = r.c_nonnegative ? "c >= 0 implies Lambda0 >= 0" : "c changes sign: no claim on Lambda0 from c";
  r.c_identically_zero = coeffs.c().cwiseAbs().maxCoeff() <= 1e-14;

  const LambdaMaximum max = maximize_lambda(coeffs);
  r.lambda0 = max.lambda0;
  r.xi_star = max.xi_star;
  r.lambda0_zero = std::abs(max.lambda0) <= zero_tol;

  if (r.c_identically_zero) {
    // Left principal eigenvector at ξ = 0 is the principal eigenfunction of P*.
    const LambdaSample at_zero = lambda_at(coeffs, RealVector::Zero(n));
    const RealVector psi = at_zero.pair.psi / at_zero.pair.psi.mean();
    RealVector integral(n);
    for (int i = 0; i < n; ++i) integral[i] = coeffs.b(i).cwiseProduct(psi).mean();
    r.drift_integral = integral;
    r.drift_criterion_consistent = (integral.norm() <= zero_tol) == r.lambda0_zero;
  }

  if (max.lambda0 >= -zero_tol) {
    // γ needs positive Bloch solutions of Pu = 0: ξ on Ξ (ξ* itself when Λ₀ = 0).
    LambdaSample s;
    if (r.lambda0_zero) {
      s = lambda_at(coeffs, max.xi_star);
    } else {
      RealVector e1 = RealVector::Zero(n);
      e1[0] = 1.0;
      s = solve_radius(coeffs, max.xi_star, e1, 1.0, 10.0 * (1.0 + max.xi_star.norm())).sample;
    }
    const RealVector& p = s.pair.p;
    const RealVector psi = p.cwiseProduct(s.pair.psi);
    RealVector gamma(n);
    for (int i = 0; i < n; ++i) {
      RealVector bt = coeffs.b(i);
      for (int j = 0; j < n; ++j) {
        std::array<int, 2> order{0, 0};
        order[static_cast<std::size_t>(j)] = 1;
        const RealVector dp = spectral_derivative(grid, p, order);
        const RealVector aij = 0.5 * (coeffs.a(i, j) + coeffs.a(j, i));
        bt -= 2.0 * aij.cwiseProduct((s.xi[j] + dp.array() / p.array()).matrix());
      }
      gamma[i] = bt.cwiseProduct(psi).mean();
    }
    r.gamma = gamma;
    r.gamma_xi = s.xi;
    r.gamma_criterion_consistent = (gamma.norm() <= zero_tol) == r.lambda0_zero;
  }
  return r;
}

double tube_margin(const PeriodicCoefficients& coeffs, const RealVector& beta, const RealVector& xi) {
  const ComplexVector k = beta.cast<std::complex<double>>() + imaginary_quasimomentum(xi);
  return spectrum(assemble(coeffs, k)).cwiseAbs().minCoeff();
}

TubeReport tube_exclusivity_check(const PeriodicCoefficients& coeffs, const XiSurface& surface, int samples,
                                  std::uint64_t seed, double margin_floor) {
  const int n = coeffs.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TubeReport report;
  report.min_margin = std::numeric_limits<double>::infinity();

  auto interior_point = [&]() -> RealVector {
    const double t = unit(rng);
    if (n == 1) {
      const RealVector& a = surface.nodes[0].xi;
      const RealVector& b = surface.nodes[1].xi;
      return a + t * (b - a);
    }
    // Point on the chord between the two nodes bracketing a random angle.
    const double theta = kTwoPi * unit(rng);
    const std::size_t m = surface.nodes.size();
    const auto j = std::min(static_cast<std::size_t>(theta / (kTwoPi / static_cast<double>(m))), m - 1);
    const RealVector pj = surface.nodes[j].xi - surface.center;
    const RealVector d = surface.nodes[(j + 1) % m].xi - surface.nodes[j].xi;
    RealVector omega(2);
    omega << std::cos(theta), std::sin(theta);
    const double chord = cross2(pj, d) / cross2(omega, d);
    return surface.center + t * chord * omega;
  };

  for (int i = 0; i < samples; ++i) {
    RealVector beta(n);
    for (int l = 0; l < n; ++l) beta[l] = -kPi + kTwoPi * unit(rng);
    const RealVector xi = interior_point();
    const double margin = tube_margin(coeffs, beta, xi);
    ++report.samples;
    if (beta.cwiseAbs().maxCoeff() <= 1e-3 && std::abs(lambda_at(coeffs, xi).lambda) <= 1e-6) {
      ++report.excluded;
      continue;
    }
    report.min_margin = std::min(report.min_margin, margin);
    if (!(margin > margin_floor)) report.violations.push_back({beta, xi, margin});
  }
  return report;
}

}  // namespace floquet
