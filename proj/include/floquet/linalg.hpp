// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace floquet {

/// All eigenvalues of a dense real matrix (Hessenberg QR).
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m);
/// All eigenvalues of a dense complex matrix (complex Schur).
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m);

/// Sorts ascending by real part, ties broken by imaginary part.
Eigen::VectorXcd sorted_by_real_part(const Eigen::VectorXcd& values);

}  // namespace floquet
