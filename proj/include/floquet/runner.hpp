// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/bloch.hpp"
#include "floquet/coefficients.hpp"
#include "floquet/io.hpp"

namespace floquet {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitHypothesis = 3,
  kExitInvariant = 4,
};

struct Tolerances {
  double lambda0_positive = 1e-8;  // Λ₀ must exceed this for Ξ commands
  double zero = 1e-7;              // "Λ₀ = 0" and vanishing-integral tests
  double xi_residual = 1e-10;      // |Λ| at traced nodes
  double invariant = 1e-8;         // generic verify tolerance

  Json to_json() const;
};

struct BandsBlock {
  std::vector<RealVector> path;
  int count = 4;
};

struct LambdaBlock {
  double lo = -2.0;
  double hi = 2.0;
  int samples = 21;
};

struct XiBlock {
  int nodes = 64;
  int directions = 32;
};

struct SynthBlock {
  int nodes = 64;
  MeasureSpec measure;
  int rays = 8;
  std::vector<double> radii;
  RealVector sample_lo, sample_hi;
  int samples = 11;
  RealVector residual_lo, residual_hi;
  double residual_spacing = 0.05;
};

struct VerifyBlock {
  int samples = 50;
  int pairs = 20;
};

/// Validated configuration. `canonical` is the effective JSON after command
/// line overrides; its SHA-256 stamps every artifact.
struct RunConfig {
  Json canonical;
  std::string sha256;
  int dimension = 1;
  std::vector<int> grid;
  CoefficientSpec coefficients;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::filesystem::path out_dir = "out";
  BandsBlock bands;
  LambdaBlock lambda;
  XiBlock xi;
  SynthBlock synth;
  VerifyBlock verify;

  ArtifactMeta meta() const;
};

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// Throws InvalidInput on any schema or coefficient error.
RunConfig parse_config(Json config, const Overrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

inline constexpr std::string_view kCommands[] = {"bands", "lambda", "xi", "synth", "verify"};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one command and writes its artifacts into `config.out_dir`. Errors
/// map to exit codes: 2 bad input, 3 Λ₀ <= tolerance, 4 numerical or
/// invariant failure.
RunResult run(const RunConfig& config, std::string_view command);

/// The invariant suite behind the verify command.
Json verify_properties(const RunConfig& config);

}  // namespace floquet
