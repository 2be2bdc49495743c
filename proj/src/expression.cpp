// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace floquet {

struct Expression::Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp };
  Kind kind;
  double value = 0.0;
  int variable = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, int dimension) : src_(src), dimension_(dimension) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != src_.size()) fail(fmt::format("unexpected '{}'", src_[pos_]));
    return root;
  }

  int max_variable() const { return max_variable_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionSyntaxError(fmt::format("syntax error at offset {}: {}", pos_, what), pos_);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Kind::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make(Node::Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (accept('-')) return make(Node::Kind::Neg, factor());
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail(fmt::format("unexpected '{}'", c));
  }

  NodePtr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = value;
    return n;
  }

  NodePtr word() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Number;
      n->value = kPi;
      return n;
    }
    if (name == "x1" || name == "x2") {
      const int var = name == "x1" ? 1 : 2;
      if (var > dimension_) {
        pos_ = start;
        fail(fmt::format("'{}' used in a {}D run", name, dimension_));
      }
      max_variable_ = std::max(max_variable_, var);
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Variable;
      n->variable = var;
      return n;
    }
    Node::Kind kind;
    if (name == "sin") {
      kind = Node::Kind::Sin;
    } else if (name == "cos") {
      kind = Node::Kind::Cos;
    } else if (name == "exp") {
      kind = Node::Kind::Exp;
    } else {
      pos_ = start;
      fail(fmt::format("unknown identifier '{}'", name));
    }
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return make(kind, arg);
  }

  std::string_view src_;
  int dimension_;
  std::size_t pos_ = 0;
  int max_variable_ = 0;
};

double eval(const Node& n, const RealVector& x) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Variable:
      return x[n.variable - 1];
    case Node::Kind::Add:
      return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Node::Kind::Sub:
      return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Node::Kind::Mul:
      return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Node::Kind::Div: {
      const double d = eval(*n.rhs, x);
      if (d == 0.0) throw InvalidInput("division by zero");
      return eval(*n.lhs, x) / d;
    }
    case Node::Kind::Neg:
      return -eval(*n.lhs, x);
    case Node::Kind::Sin:
      return std::sin(eval(*n.lhs, x));
    case Node::Kind::Cos:
      return std::cos(eval(*n.lhs, x));
    case Node::Kind::Exp:
      return std::exp(eval(*n.lhs, x));
  }
  return 0.0;
}

}  // namespace

ExpressionSyntaxError::ExpressionSyntaxError(const std::string& message, std::size_t offset)
    : InvalidInput(message), offset_(offset) {}

Expression::Expression(std::shared_ptr<const Node> root, std::string source, int max_variable)
    : root_(std::move(root)), source_(std::move(source)), max_variable_(max_variable) {}

double Expression::evaluate(const RealVector& x) const {
  if (max_variable_ > x.size()) {
    throw InvalidInput(fmt::format("expression '{}' needs {} coordinates", source_, max_variable_));
  }
  double v = 0.0;
  try {
    v = eval(*root_, x);
  } catch (const InvalidInput&) {
    v = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(v)) {
    std::string at = fmt::format("{}", x[0]);
    if (x.size() > 1) at += fmt::format(", {}", x[1]);
    throw InvalidInput(fmt::format("expression '{}' singular at node ({})", source_, at));
  }
  return v;
}

Expression parse_expr(std::string_view source, int dimension) {
  Parser parser(source, dimension);
  NodePtr root = parser.parse();
  return Expression(std::move(root), std::string(source), parser.max_variable());
}

}  // namespace floquet
