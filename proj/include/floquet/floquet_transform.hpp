// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <vector>

#include "floquet/grid.hpp"

namespace floquet {

/// Lattice vector γ; the second entry is 0 in 1D.
using LatticePoint = std::array<int, 2>;

/// Finitely supported function on R^n cut into lattice cells:
/// cells[γ](x) = f(x + γ) for x in the unit cell.
struct CellField {
  TorusGrid grid;
  std::map<LatticePoint, ComplexVector> cells;

  /// Largest |γ_l| over the support, per axis.
  std::vector<int> extent() const;
};

/// Samples of Uf(z, x) = Σ_γ f(x - γ) z^γ at z_l = exp(2πi m_l / M_l).
struct FloquetImage {
  TorusGrid grid;
  std::vector<int> counts;            // M_l per axis
  std::vector<ComplexVector> values;  // flat multiplier index, m_1 fastest

  std::size_t multiplier_count() const { return values.size(); }
  std::array<int, 2> multiplier_index(std::size_t flat) const;
  ComplexVector multiplier(std::size_t flat) const;
};

/// Smallest multiplier grid that inverts `f` exactly: M_l = 2 max|γ_l| + 1.
std::vector<int> minimal_counts(const CellField& f);

/// Throws InvalidInput("aliasing: enlarge multiplier grid") when some
/// M_l < 2 max|γ_l| + 1.
FloquetImage floquet_forward(const CellField& f, const std::vector<int>& counts);

/// Fourier coefficients over the multiplier grid. Cells whose L² norm is at
/// most `prune_tol` times the largest are dropped.
CellField floquet_inverse(const FloquetImage& image, double prune_tol = 1e-13);

/// Direct summation of the defining series at an arbitrary z in (C \ 0)^n.
ComplexVector floquet_evaluate(const CellField& f, const ComplexVector& z);

/// L²(K) norm with the uniform grid quadrature.
double cell_norm(const ComplexVector& values);

struct PlancherelResult {
  double norm_space = 0.0;  // (Σ_γ ‖f_γ‖²)^{1/2}
  double norm_image = 0.0;  // (mean over z of ‖Uf(z)‖²)^{1/2}
  double relative_defect() const;
};

/// Uses `counts` when given, otherwise the minimal multiplier grid.
PlancherelResult plancherel_check(const CellField& f, const std::vector<int>& counts = {});

/// ‖Uf(z, ·)‖ for every sampled multiplier.
std::vector<double> per_multiplier_norms(const FloquetImage& image);

}  // namespace floquet
