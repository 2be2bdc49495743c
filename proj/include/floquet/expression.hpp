// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "floquet/error.hpp"
#include "floquet/grid.hpp"

namespace floquet {

/// Syntax error in a coefficient expression; `offset` is the byte offset
/// at which parsing failed.
class ExpressionSyntaxError : public InvalidInput {
 public:
  ExpressionSyntaxError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Compiled coefficient expression over the grammar
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := number | 'pi' | 'x1' | 'x2'
///           | ('sin'|'cos'|'exp') '(' expr ')' | '(' expr ')' | '-' factor
class Expression {
 public:
  struct Node;

  Expression() = default;
  explicit Expression(std::shared_ptr<const Node> root, std::string source, int max_variable);

  /// Throws InvalidInput("singular at node ...") on division by zero or a
  /// non-finite result.
  double evaluate(const RealVector& x) const;

  const std::string& source() const { return source_; }
  /// Highest variable index referenced (0 if constant, 1 for x1, 2 for x2).
  int max_variable() const { return max_variable_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  int max_variable_ = 0;
};

/// Parses `source`. A reference to x2 when `dimension` is 1 is rejected.
Expression parse_expr(std::string_view source, int dimension = 2);

}  // namespace floquet
