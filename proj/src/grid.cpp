// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/grid.hpp"

#include <fmt/format.h>

#include "floquet/error.hpp"

namespace floquet {

TorusGrid::TorusGrid(int dimension, std::vector<int> sizes)
    : dimension_(dimension), sizes_(std::move(sizes)), node_count_(1) {
  if (dimension_ != 1 && dimension_ != 2) {
    throw InvalidInput(fmt::format("dimension unsupported: {}", dimension_));
  }
  if (static_cast<int>(sizes_.size()) != dimension_) {
    throw InvalidInput(fmt::format("grid needs {} sizes, got {}", dimension_, sizes_.size()));
  }
  for (int n : sizes_) {
    // Odd or tiny sizes alias the spectral derivative.
    if (n < 4 || n % 2 != 0) {
      throw InvalidInput(fmt::format("grid size must be even and >= 4, got {}", n));
    }
    node_count_ *= static_cast<std::size_t>(n);
  }
}

std::array<int, 2> TorusGrid::multi_index(std::size_t index) const {
  const auto n1 = static_cast<std::size_t>(sizes_[0]);
  return {static_cast<int>(index % n1), static_cast<int>(index / n1)};
}

std::size_t TorusGrid::flat_index(int j1, int j2) const {
  return static_cast<std::size_t>(j1) + static_cast<std::size_t>(sizes_[0]) * static_cast<std::size_t>(j2);
}

RealVector TorusGrid::node(std::size_t index) const {
  const auto j = multi_index(index);
  RealVector x(dimension_);
  for (int l = 0; l < dimension_; ++l) x[l] = static_cast<double>(j[static_cast<std::size_t>(l)]) / size(l);
  return x;
}

std::pair<RealVector, RealVector> TorusGrid::brillouin_zone() const {
  return {RealVector::Constant(dimension_, -kPi), RealVector::Constant(dimension_, kPi)};
}

TorusGrid TorusGrid::refined(int factor) const {
  std::vector<int> sizes = sizes_;
  for (int& n : sizes) n *= factor;
  return TorusGrid(dimension_, std::move(sizes));
}

TorusGrid build_grid(int dimension, const std::vector<int>& sizes) { return TorusGrid(dimension, sizes); }

}  // namespace floquet
