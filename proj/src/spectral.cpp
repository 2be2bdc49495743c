// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/spectral.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/linalg.hpp"

namespace floquet {

namespace {

constexpr double kImagTol = 1e-8;
constexpr double kGapFloor = 1e-10;
constexpr double kPositivityTol = 1e-8;
constexpr double kResidualTol = 1e-9;

// Sign-aligns v so that its largest-modulus entry is positive, then checks
// that no entry is negative beyond the positivity tolerance.
void align_and_check(RealVector& v, const char* which) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
  const double peak = v[arg];
  if (v.minCoeff() < -kPositivityTol * peak) {
    throw NumericalFailure(fmt::format("positivity violation: {} eigenfunction changes sign (min/max = {:.3e})",
                                       which, v.minCoeff() / peak));
  }
}

ComplexVector lowest(const ComplexVector& sorted, int count) {
  return sorted.head(std::min<Eigen::Index>(count, sorted.size()));
}

double directed_distance(const ComplexVector& from, const ComplexVector& to) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < from.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < to.size(); ++j) best = std::min(best, std::abs(from[i] - to[j]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

PrincipalEigenpair principal_eigenpair(const AssembledOperator& op) {
  if (op.k.real().cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidInput("principal_eigenpair requires a purely imaginary quasimomentum k = -i xi");
  }
  const Eigen::MatrixXd m = op.real_matrix();
  const Eigen::Index n = m.rows();
  const ComplexVector ev = eigenvalues(m);

  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (ev[i].real() < ev[arg].real()) arg = i;
  }
  const std::complex<double> lead = ev[arg];
  if (std::abs(lead.imag()) > kImagTol * (1.0 + std::abs(lead))) {
    throw NumericalFailure(fmt::format("principal eigenvalue is not real: {} + {}i", lead.real(), lead.imag()));
  }
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != arg) gap = std::min(gap, ev[i].real() - lead.real());
  }
  if (gap < kGapFloor) {
    throw NumericalFailure(fmt::format("near-degenerate principal eigenvalue (gap {:.3e})", gap));
  }

  // Inverse iteration with a shift just below the eigenvalue.
  const double delta = std::min(1e-8 * (1.0 + std::abs(lead.real())), 1e-3 * gap);
  const Eigen::MatrixXd shifted = m - (lead.real() - delta) * Eigen::MatrixXd::Identity(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  RealVector p = RealVector::Ones(n);
  RealVector psi = RealVector::Ones(n);
  for (int iter = 0; iter < 4; ++iter) {
    p = lu.solve(p);
    p /= p.cwiseAbs().maxCoeff();
    psi = lu.transpose().solve(psi);
    psi /= psi.cwiseAbs().maxCoeff();
  }
  align_and_check(p, "right");
  align_and_check(psi, "left");
  p /= p.mean();
  psi /= psi.cwiseProduct(p).mean();

  PrincipalEigenpair out;
  const RealVector mp = m * p;
  out.lambda = psi.dot(mp) / psi.dot(p);
  out.p = std::move(p);
  out.psi = std::move(psi);
  out.right_residual = (mp - out.lambda * out.p).norm() / out.p.norm();
  out.left_residual = (m.transpose() * out.psi - out.lambda * out.psi).norm() / out.psi.norm();
  out.gap = gap;

  const double scale = 1.0 + m.diagonal().cwiseAbs().maxCoeff();
  if (out.right_residual > kResidualTol * scale || out.left_residual > kResidualTol * scale) {
    throw NumericalFailure(fmt::format("principal eigenpair residual too large ({:.3e}, {:.3e})", out.right_residual,
                                       out.left_residual));
  }
  return out;
}

ComplexVector spectrum(const AssembledOperator& op) {
  if (op.is_real()) return sorted_by_real_part(eigenvalues(Eigen::MatrixXd(op.matrix.real())));
  return sorted_by_real_part(eigenvalues(op.matrix));
}

BandStructure band_functions(const PeriodicCoefficients& coeffs, const std::vector<RealVector>& path, int count) {
  if (count < 1 || static_cast<std::size_t>(count) > coeffs.grid().node_count() / 2) {
    throw InvalidInput(fmt::format("band count must be in [1, node_count/2], got {}", count));
  }
  auto shared = std::make_shared<const PeriodicCoefficients>(coeffs);
  BandStructure out;
  for (const RealVector& k : path) {
    out.path.push_back(k);
    out.bands.push_back(lowest(spectrum(assemble(shared, k.cast<std::complex<double>>())), count));
  }
  return out;
}

FermiMembership fermi_membership(const PeriodicCoefficients& coeffs, const ComplexVector& k, double tol) {
  const ComplexVector ev = spectrum(assemble(coeffs, k));
  const double distance = ev.cwiseAbs().minCoeff();
  return {distance <= tol, distance};
}

DualDispersionReport dual_dispersion_check(const PeriodicCoefficients& coeffs, const ComplexVector& k, int count) {
  AdjointResult adjoint = formal_adjoint(coeffs);
  DualDispersionReport out;
  const ComplexVector adj = spectrum(assemble(adjoint.coefficients, k));
  const ComplexVector refl = spectrum(assemble(coeffs, ComplexVector(-k)));
  out.adjoint_spectrum = lowest(adj, count);
  out.reflected_spectrum = lowest(refl, count);
  // Match each truncated list against a slightly longer head of the other so
  // a conjugate pair split by the cut does not register as a mismatch.
  out.max_distance = std::max(directed_distance(out.adjoint_spectrum, lowest(refl, count + 4)),
                              directed_distance(out.reflected_spectrum, lowest(adj, count + 4)));
  out.warnings = std::move(adjoint.warnings);
  return out;
}

}  // namespace floquet
