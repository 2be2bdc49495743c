// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "floquet/operator.hpp"

namespace floquet {

/// Principal eigenvalue of the conjugated torus operator together with its
/// positive right eigenfunction p and positive left eigenfunction psi.
///
/// Normalized so that mean(p) = 1 and mean(psi * p) = 1, i.e. ∫_K p = 1 and
/// <psi, p> = 1 for the bilinear pairing.
struct PrincipalEigenpair {
  double lambda = 0.0;
  RealVector p;
  RealVector psi;
  double right_residual = 0.0;
  double left_residual = 0.0;
  /// Distance in real part from lambda to the rest of the spectrum.
  double gap = 0.0;
};

/// Principal eigenpair of an operator assembled at k = -iξ with real ξ.
///
/// The eigenvalue of smallest real part is selected from the full dense
/// spectrum and the positivity of both eigenvectors is verified.
/// Throws NumericalFailure on "positivity violation" or
/// "near-degenerate principal eigenvalue".
PrincipalEigenpair principal_eigenpair(const AssembledOperator& op);

/// Full spectrum of an assembled operator, sorted by real part.
ComplexVector spectrum(const AssembledOperator& op);

struct BandStructure {
  std::vector<RealVector> path;
  /// bands[i] holds the m lowest eigenvalues at path[i], sorted by real part.
  std::vector<ComplexVector> bands;
};

BandStructure band_functions(const PeriodicCoefficients& coeffs, const std::vector<RealVector>& path, int count);

struct FermiMembership {
  bool member = false;
  double distance = 0.0;
};

/// k lies on the Fermi surface when 0 is (within tol) an eigenvalue of P(x, D+k).
FermiMembership fermi_membership(const PeriodicCoefficients& coeffs, const ComplexVector& k, double tol);

struct DualDispersionReport {
  ComplexVector adjoint_spectrum;    // lowest eigenvalues of P*(x, D+k)
  ComplexVector reflected_spectrum;  // lowest eigenvalues of P(x, D-k)
  double max_distance = 0.0;
  std::vector<std::string> warnings;
};

/// Compares the `count` lowest eigenvalues of the adjoint at k with those of
/// the original operator at -k; max_distance is the worst distance from an
/// eigenvalue in either list to the nearest eigenvalue of the other.
DualDispersionReport dual_dispersion_check(const PeriodicCoefficients& coeffs, const ComplexVector& k, int count = 6);

}  // namespace floquet
