// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace floquet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Uniform collocation grid on the unit cell [0,1)^n of the lattice Z^n.
///
/// Nodes are j/N_l per axis; the flat node index runs fastest along x1.
class TorusGrid {
 public:
  TorusGrid(int dimension, std::vector<int> sizes);

  int dimension() const { return dimension_; }
  const std::vector<int>& sizes() const { return sizes_; }
  int size(int axis) const { return sizes_[static_cast<std::size_t>(axis)]; }
  std::size_t node_count() const { return node_count_; }
  double spacing(int axis) const { return 1.0 / size(axis); }

  /// Per-axis integer coordinates of a flat node index.
  std::array<int, 2> multi_index(std::size_t index) const;
  std::size_t flat_index(int j1, int j2 = 0) const;
  RealVector node(std::size_t index) const;

  /// The first Brillouin zone [-π, π]^n as (lower, upper) corners.
  std::pair<RealVector, RealVector> brillouin_zone() const;

  /// Same geometry with every axis refined by `factor`.
  TorusGrid refined(int factor) const;

  bool operator==(const TorusGrid& other) const = default;

 private:
  int dimension_;
  std::vector<int> sizes_;
  std::size_t node_count_;
};

TorusGrid build_grid(int dimension, const std::vector<int>& sizes);

}  // namespace floquet
