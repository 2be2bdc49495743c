// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/operator.hpp"

namespace floquet {

namespace {

using cd = std::complex<double>;

constexpr int kMaxOrder = 4;

// Central second-order difference weights for d^m/ds^m, offsets -q..q.
const std::array<std::vector<double>, kMaxOrder + 1> kStencils = {{
    {1.0},
    {-0.5, 0.0, 0.5},
    {1.0, -2.0, 1.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

double angle_distance(double a, double b) {
  const double d = std::remainder(a - b, kTwoPi);
  return std::abs(d);
}

}  // namespace

BlochMember make_member(const TorusGrid& grid, const LambdaSample& sample, double param) {
  BlochMember m;
  m.param = param;
  m.xi = sample.xi;
  m.p = sample.pair.p / sample.pair.p.mean();
  m.interpolant = TrigInterpolant(grid, m.p);
  return m;
}

ScaledComplex bloch_eval(const BlochMember& member, const RealVector& x) {
  return {member.interpolant(x), member.xi.dot(x)};
}

std::vector<ScaledComplex> bloch_eval(const BlochMember& member, const std::vector<RealVector>& points) {
  std::vector<ScaledComplex> out;
  out.reserve(points.size());
  for (const RealVector& x : points) out.push_back(bloch_eval(member, x));
  return out;
}

BlochFamily::BlochFamily(std::shared_ptr<const PeriodicCoefficients> coeffs, XiSurface surface)
    : coeffs_(std::move(coeffs)), surface_(std::move(surface)) {
  const TorusGrid& grid = coeffs_->grid();
  for (const XiNode& node : surface_.nodes) {
    LambdaSample s{node.xi, 0.0, node.pair};
    members_.push_back(make_member(grid, s, node.param));
    if (members_.back().p.minCoeff() <= 0.0) {
      throw NumericalFailure(fmt::format("positivity violation: Bloch factor at node {} is not positive", node.param));
    }
  }
  if (dimension() == 2) {
    const std::size_t m = members_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const RealVector diff = members_[(i + 1) % m].p - members_[i].p;
      continuity_ = std::max(continuity_, std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size())) / spacing());
    }
  }
}

double BlochFamily::spacing() const {
  return dimension() == 2 ? kTwoPi / static_cast<double>(members_.size()) : 0.0;
}

BlochMember BlochFamily::member_at(double s) const {
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const double d = dimension() == 2 ? angle_distance(s, members_[i].param) : std::abs(s - members_[i].param);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  if (best <= 1e-14) return members_[nearest];
  if (dimension() == 1) throw InvalidInput(fmt::format("1D surface parameter must be -1 or 1, got {}", s));
  RealVector omega(2);
  omega << std::cos(s), std::sin(s);
  const double max_radius = 10.0 * (1.0 + surface_.center.norm());
  RadialRoot root = solve_radius(*coeffs_, surface_.center, omega, surface_.nodes[nearest].radius, max_radius);
  return make_member(coeffs_->grid(), root.sample, s);
}

SynthesizedSolution::SynthesizedSolution(std::vector<Term> terms, int order)
    : terms_(std::move(terms)), order_(order) {}

ScaledComplex SynthesizedSolution::eval_scaled(const RealVector& x) const {
  if (terms_.empty()) return {};
  double top = -std::numeric_limits<double>::infinity();
  for (const Term& t : terms_) top = std::max(top, t.member->xi.dot(x));
  cd sum = 0.0;
  for (const Term& t : terms_) {
    sum += t.weight * t.member->interpolant(x) * std::exp(t.member->xi.dot(x) - top);
  }
  return {sum, top};
}

std::vector<ScaledComplex> SynthesizedSolution::evaluate(const std::vector<RealVector>& points) const {
  std::vector<ScaledComplex> out;
  out.reserve(points.size());
  for (const RealVector& x : points) out.push_back(eval_scaled(x));
  return out;
}

SynthesizedSolution derivative_atom(const BlochFamily& family, double s0, int order) {
  if (order < 0 || order > kMaxOrder) throw InvalidInput(fmt::format("unsupported distribution order {}", order));
  if (order == 0) {
    return SynthesizedSolution({{1.0, std::make_shared<const BlochMember>(family.member_at(s0))}}, 0);
  }
  if (family.dimension() == 1) {
    throw InvalidInput("1D surface admits no tangential derivatives; atoms must have order 0");
  }
  if (family.under_resolved()) {
    throw NumericalFailure(fmt::format("family under-resolved: continuity constant {:.3e} at spacing {:.3e}",
                                       family.continuity_constant(), family.spacing()));
  }
  // Larger steps for higher orders keep roundoff in the eigenfunctions from
  // dominating the difference quotient.
  const double h = 1e-3 * family.spacing() * std::pow(4.0, order - 1);
  const std::vector<double>& w = kStencils[static_cast<std::size_t>(order)];
  const int q = static_cast<int>(w.size() / 2);
  // Offsets in units of h/2: D(h) uses 2j, D(h/2) uses j.
  std::map<int, double> combined;
  for (int j = -q; j <= q; ++j) {
    const double wj = w[static_cast<std::size_t>(j + q)];
    combined[2 * j] -= wj / std::pow(h, order) / 3.0;
    combined[j] += 4.0 * wj / std::pow(0.5 * h, order) / 3.0;
  }
  std::vector<SynthesizedSolution::Term> terms;
  for (const auto& [offset, weight] : combined) {
    if (weight == 0.0) continue;
    terms.push_back({weight, std::make_shared<const BlochMember>(family.member_at(s0 + 0.5 * h * offset))});
  }
  return SynthesizedSolution(std::move(terms), order);
}

std::vector<ScaledComplex> derivative_atom_eval(const BlochFamily& family, double s0, int order,
                                                const std::vector<RealVector>& points) {
  if (order == 0) return bloch_eval(family.member_at(s0), points);
  return derivative_atom(family, s0, order).evaluate(points);
}

int MeasureOnXi::order() const {
  int n = 0;
  for (const Atom& a : atoms) n = std::max(n, a.order);
  return n;
}

cd MeasureOnXi::total_mass() const {
  cd total = 0.0;
  for (const cd& w : weights) total += w;
  for (const Atom& a : atoms) {
    if (a.order == 0) total += a.weight;
  }
  return total;
}

MeasureOnXi make_measure(const MeasureSpec& spec, const XiSurface& surface) {
  const std::size_t m = surface.nodes.size();
  MeasureOnXi mu;
  auto finite = [](cd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  if (!spec.density.empty()) {
    if (spec.density.size() != 1 && spec.density.size() != m) {
      throw InvalidInput(fmt::format("density needs 1 or {} values, got {}", m, spec.density.size()));
    }
    const double dw = surface.dimension == 2 ? kTwoPi / static_cast<double>(m) : 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const cd d = spec.density.size() == 1 ? spec.density[0] : spec.density[i];
      if (!finite(d)) throw InvalidInput("measure weights must be finite");
      mu.weights.push_back(d * dw);
    }
  }
  for (const Atom& a : spec.atoms) {
    if (a.order < 0 || a.order > kMaxOrder) {
      throw InvalidInput(fmt::format("unsupported distribution order {} (maximum {})", a.order, kMaxOrder));
    }
    if (!finite(a.weight) || !std::isfinite(a.s)) throw InvalidInput("measure weights must be finite");
    if (surface.dimension == 1 && a.order > 0) {
      throw InvalidInput("1D surface admits no tangential derivatives; atoms must have order 0");
    }
    mu.atoms.push_back(a);
  }
  return mu;
}

SynthesizedSolution synthesize(const BlochFamily& family, const MeasureOnXi& mu) {
  std::vector<SynthesizedSolution::Term> terms;
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    if (mu.weights[i] == cd{0.0, 0.0}) continue;
    terms.push_back({mu.weights[i], std::make_shared<const BlochMember>(family.node(i))});
  }
  for (const Atom& a : mu.atoms) {
    const SynthesizedSolution atom = derivative_atom(family, a.s, a.order);
    for (const auto& t : atom.terms()) terms.push_back({a.weight * t.weight, t.member});
  }
  return SynthesizedSolution(std::move(terms), mu.order());
}

double residual_norm(const PeriodicCoefficients& coeffs, const SynthesizedSolution& u, const RealVector& lo,
                     const RealVector& hi, double spacing) {
  const BoxGrid box = make_box(lo, hi, spacing);
  BoxFunction samples{box, ComplexVector(static_cast<Eigen::Index>(box.node_count()))};
  for (std::size_t i = 0; i < box.node_count(); ++i) samples.values[static_cast<Eigen::Index>(i)] = u(box.node(i));
  const BoxFunction pu = apply_on_box(coeffs, samples);
  double norm = 0.0;
  for (std::size_t i = 0; i < pu.box.node_count(); ++i) norm += std::norm(u(pu.box.node(i)));
  norm = std::sqrt(norm);
  if (!(norm >= 1e-300)) throw NumericalFailure("solution vanishes on box");
  return pu.values.norm() / norm;
}

EnvelopeRay envelope_fit_ray(const SynthesizedSolution& u, const IndicatorFn& h, const RealVector& omega,
                             const std::vector<double>& radii) {
  EnvelopeRay ray;
  ray.omega = omega;
  ray.h = h(omega);
  std::vector<double> r, y, logu;
  for (double rad : radii) {
    const double l = u.eval_scaled(rad * omega).log_abs();
    if (!std::isfinite(l)) continue;
    r.push_back(rad);
    logu.push_back(l);
    y.push_back(l - ray.h * rad);
  }
  if (r.size() < 2) {
    ray.skipped = true;
    return ray;
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(r.size()), 2);
  RealVector rhs(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = std::log1p(r[i]);
    design(row, 1) = 1.0;
    rhs[row] = y[i];
  }
  const RealVector fit = design.colPivHouseholderQr().solve(rhs);
  ray.n_fit = fit[0];
  ray.c_fit = fit[1];
  ray.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    ray.max_excess = std::max(ray.max_excess, y[i] - (ray.n_fit + 0.5) * std::log1p(r[i]) - ray.c_fit);
  }
  const std::size_t first = r.size() / 2;
  if (r.size() - first >= 2) {
    double mr = 0.0, ml = 0.0;
    for (std::size_t i = first; i < r.size(); ++i) {
      mr += r[i];
      ml += logu[i];
    }
    const double k = static_cast<double>(r.size() - first);
    mr /= k;
    ml /= k;
    double num = 0.0, den = 0.0;
    for (std::size_t i = first; i < r.size(); ++i) {
      num += (r[i] - mr) * (logu[i] - ml);
      den += (r[i] - mr) * (r[i] - mr);
    }
    ray.slope = den > 0.0 ? num / den : 0.0;
  }
  return ray;
}

std::vector<EnvelopeRay> envelope_fit(const SynthesizedSolution& u, const IndicatorFn& h,
                                      const std::vector<RealVector>& rays, const std::vector<double>& radii) {
  if (!std::is_sorted(radii.begin(), radii.end()) || radii.empty() || radii.front() < 0.0 || radii.back() > 50.0) {
    throw InvalidInput("radii must be increasing within [0, 50]");
  }
  std::vector<EnvelopeRay> out;
  for (const RealVector& omega : rays) out.push_back(envelope_fit_ray(u, h, omega, radii));
  return out;
}

bool positivity_check(const SynthesizedSolution& u, const std::vector<RealVector>& points) {
  if (u.order() > 0) throw InvalidInput("positivity check needs a measure without derivative atoms");
  for (const RealVector& x : points) {
    const cd m = u.eval_scaled(x).mantissa;
    if (!(m.real() > 0.0) || std::abs(m.imag()) > 1e-10 * std::abs(m)) return false;
  }
  return true;
}

CompletenessResult ode_completeness_1d(const BlochFamily& family, double u0, double du0) {
  if (family.dimension() != 1 || family.size() != 2) {
    throw InvalidInput("ODE completeness check needs a 1D surface with two points");
  }
  const PeriodicCoefficients& coeffs = family.coefficients();
  const TorusGrid& grid = coeffs.grid();
  const TrigInterpolant a(grid, coeffs.a(0, 0));
  const TrigInterpolant b(grid, coeffs.b(0));
  const TrigInterpolant c(grid, coeffs.c());

  using State = std::array<double, 2>;
  auto rhs = [&](const State& s, State& ds, double x) {
    const RealVector at = RealVector::Constant(1, x);
    ds[0] = s[1];
    ds[1] = (b(at).real() * s[1] + c(at).real() * s[0]) / a(at).real();
  };
  const std::vector<double> times = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<double> values;
  State state{u0, du0};
  namespace odeint = boost::numeric::odeint;
  odeint::integrate_times(odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>()), rhs, state,
                          times.begin(), times.end(), 1e-3,
                          [&](const State& s, double) { values.push_back(s[0]); });

  const BlochMember& minus = family.node(0);
  const BlochMember& plus = family.node(1);
  auto u = [](const BlochMember& m, double x) { return bloch_eval(m, RealVector::Constant(1, x)).value().real(); };
  Eigen::Matrix2d match;
  match << u(minus, 0.0), u(plus, 0.0), u(minus, 1.0), u(plus, 1.0);
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(match);
  const double cond = svd.singularValues()[0] / svd.singularValues()[1];
  if (!(cond <= 1e8)) throw NumericalFailure(fmt::format("Bloch solutions nearly dependent (condition {:.3e})", cond));
  const Eigen::Vector2d coef = match.fullPivLu().solve(Eigen::Vector2d(values[0], values[1]));

  CompletenessResult out{coef[0], coef[1], 0.0};
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double model = coef[0] * u(minus, times[i]) + coef[1] * u(plus, times[i]);
    out.max_mismatch = std::max(out.max_mismatch, std::abs(values[i] - model) / std::max(1.0, std::abs(values[i])));
  }
  return out;
}

}  // namespace floquet
