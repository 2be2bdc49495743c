// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/floquet_transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "floquet/error.hpp"

namespace floquet {

namespace {

using cd = std::complex<double>;

int wrap(int gamma, int m) { return ((gamma % m) + m) % m; }

int unwrap(int j, int m) { return j < (m + 1) / 2 ? j : j - m; }

std::vector<int> padded(const std::vector<int>& counts, int dimension) {
  if (static_cast<int>(counts.size()) != dimension) {
    throw InvalidInput(fmt::format("multiplier grid needs {} counts, got {}", dimension, counts.size()));
  }
  std::vector<int> m = counts;
  if (dimension == 1) m.push_back(1);
  return m;
}

// 2D FFT (or 1D when m2 == 1) of an m1 x m2 array stored with m1 fastest.
void fft_2d(std::vector<cd>& data, int m1, int m2, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<cd> in, out;
  auto run = [&](std::vector<cd>& a, std::vector<cd>& b) {
    if (inverse) {
      fft.inv(b, a);
    } else {
      fft.fwd(b, a);
    }
  };
  in.resize(static_cast<std::size_t>(m1));
  for (int r = 0; r < m2; ++r) {
    for (int j = 0; j < m1; ++j) in[static_cast<std::size_t>(j)] = data[static_cast<std::size_t>(j + m1 * r)];
    run(in, out);
    for (int j = 0; j < m1; ++j) data[static_cast<std::size_t>(j + m1 * r)] = out[static_cast<std::size_t>(j)];
  }
  if (m2 == 1) return;
  in.resize(static_cast<std::size_t>(m2));
  for (int c = 0; c < m1; ++c) {
    for (int j = 0; j < m2; ++j) in[static_cast<std::size_t>(j)] = data[static_cast<std::size_t>(c + m1 * j)];
    run(in, out);
    for (int j = 0; j < m2; ++j) data[static_cast<std::size_t>(c + m1 * j)] = out[static_cast<std::size_t>(j)];
  }
}

}  // namespace

std::vector<int> CellField::extent() const {
  std::vector<int> e(static_cast<std::size_t>(grid.dimension()), 0);
  for (const auto& [gamma, values] : cells) {
    for (std::size_t l = 0; l < e.size(); ++l) e[l] = std::max(e[l], std::abs(gamma[l]));
  }
  return e;
}

std::array<int, 2> FloquetImage::multiplier_index(std::size_t flat) const {
  const auto m1 = static_cast<std::size_t>(counts[0]);
  return {static_cast<int>(flat % m1), static_cast<int>(flat / m1)};
}

ComplexVector FloquetImage::multiplier(std::size_t flat) const {
  const auto m = multiplier_index(flat);
  ComplexVector z(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t l = 0; l < counts.size(); ++l) {
    z[static_cast<Eigen::Index>(l)] = std::polar(1.0, kTwoPi * m[l] / counts[l]);
  }
  return z;
}

std::vector<int> minimal_counts(const CellField& f) {
  std::vector<int> m = f.extent();
  for (int& v : m) v = 2 * v + 1;
  return m;
}

FloquetImage floquet_forward(const CellField& f, const std::vector<int>& counts) {
  const int n = f.grid.dimension();
  const std::vector<int> m = padded(counts, n);
  const std::vector<int> ext = f.extent();
  for (int l = 0; l < n; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    if (m[ul] < 2 * ext[ul] + 1) {
      throw InvalidInput(fmt::format("aliasing: enlarge multiplier grid (axis {} has {} < {})", l + 1, m[ul],
                                     2 * ext[ul] + 1));
    }
  }
  const auto nodes = static_cast<Eigen::Index>(f.grid.node_count());
  for (const auto& [gamma, values] : f.cells) {
    if (values.size() != nodes) throw InvalidInput("cell values do not match the cell grid");
  }
  const std::size_t total = static_cast<std::size_t>(m[0]) * static_cast<std::size_t>(m[1]);
  FloquetImage image{f.grid, counts, std::vector<ComplexVector>(total, ComplexVector::Zero(nodes))};
  // Uf(z) = Σ_γ cells[γ] z^{-γ}: a forward DFT over γ at every node.
  std::vector<cd> line(total);
  for (Eigen::Index x = 0; x < nodes; ++x) {
    std::fill(line.begin(), line.end(), cd{0.0, 0.0});
    for (const auto& [gamma, values] : f.cells) {
      line[static_cast<std::size_t>(wrap(gamma[0], m[0]) + m[0] * wrap(gamma[1], m[1]))] = values[x];
    }
    fft_2d(line, m[0], m[1], false);
    for (std::size_t k = 0; k < total; ++k) image.values[k][x] = line[k];
  }
  return image;
}

CellField floquet_inverse(const FloquetImage& image, double prune_tol) {
  const int n = image.grid.dimension();
  const std::vector<int> m = padded(image.counts, n);
  const std::size_t total = image.values.size();
  const auto nodes = static_cast<Eigen::Index>(image.grid.node_count());
  std::vector<ComplexVector> coeffs(total, ComplexVector::Zero(nodes));
  std::vector<cd> line(total);
  for (Eigen::Index x = 0; x < nodes; ++x) {
    for (std::size_t k = 0; k < total; ++k) line[k] = image.values[k][x];
    fft_2d(line, m[0], m[1], true);
    for (std::size_t k = 0; k < total; ++k) coeffs[k][x] = line[k];
  }
  double largest = 0.0;
  for (const auto& c : coeffs) largest = std::max(largest, cell_norm(c));
  CellField f{image.grid, {}};
  for (std::size_t k = 0; k < total; ++k) {
    if (cell_norm(coeffs[k]) <= prune_tol * largest) continue;
    const int j1 = static_cast<int>(k % static_cast<std::size_t>(m[0]));
    const int j2 = static_cast<int>(k / static_cast<std::size_t>(m[0]));
    f.cells.emplace(LatticePoint{unwrap(j1, m[0]), unwrap(j2, m[1])}, std::move(coeffs[k]));
  }
  return f;
}

ComplexVector floquet_evaluate(const CellField& f, const ComplexVector& z) {
  const int n = f.grid.dimension();
  if (z.size() != n) throw InvalidInput("multiplier dimension does not match the field");
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(f.grid.node_count()));
  for (const auto& [gamma, values] : f.cells) {
    cd w = 1.0;
    for (int l = 0; l < n; ++l) w *= std::pow(z[l], -gamma[static_cast<std::size_t>(l)]);
    out += w * values;
  }
  return out;
}

double cell_norm(const ComplexVector& values) {
  return values.size() == 0 ? 0.0 : std::sqrt(values.squaredNorm() / static_cast<double>(values.size()));
}

double PlancherelResult::relative_defect() const {
  return norm_space == 0.0 ? std::abs(norm_image) : std::abs(norm_image / norm_space - 1.0);
}

PlancherelResult plancherel_check(const CellField& f, const std::vector<int>& counts) {
  PlancherelResult r;
  double space = 0.0;
  for (const auto& [gamma, values] : f.cells) space += std::pow(cell_norm(values), 2);
  r.norm_space = std::sqrt(space);
  const FloquetImage image = floquet_forward(f, counts.empty() ? minimal_counts(f) : counts);
  double sum = 0.0;
  for (double v : per_multiplier_norms(image)) sum += v * v;
  r.norm_image = std::sqrt(sum / static_cast<double>(image.multiplier_count()));
  return r;
}

std::vector<double> per_multiplier_norms(const FloquetImage& image) {
  std::vector<double> out;
  out.reserve(image.values.size());
  for (const auto& v : image.values) out.push_back(cell_norm(v));
  return out;
}

}  // namespace floquet
