// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/linalg.hpp"

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "floquet/error.hpp"

namespace floquet {

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("real eigenvalue solver failed to converge");
  return solver.eigenvalues();
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("complex eigenvalue solver failed to converge");
  return solver.eigenvalues();
}

Eigen::VectorXcd sorted_by_real_part(const Eigen::VectorXcd& values) {
  std::vector<std::complex<double>> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace floquet
