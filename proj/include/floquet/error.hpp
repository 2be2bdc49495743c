// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed config, invalid grid, non-elliptic coefficients, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The operator does not satisfy Λ₀ > 0, which every Ξ-based operation needs.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// A numerical certificate failed (positivity, gap, residual, bracketing).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace floquet
