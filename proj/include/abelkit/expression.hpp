#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "abelkit/scalar_function.hpp"

namespace abelkit::expr {

enum class Kind { constant, variable, parameter, add, sub, mul, div, neg, pow, call };

enum class Func { exp, ln, sin, cos, sqrt, arctan };

const char* to_string(Func f) noexcept;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::constant;
  /// constant value, or the bound value of a parameter
  double value = 0.0;
  /// parameter name
  std::string name;
  Func func = Func::exp;
  /// integer exponent of ^
  int exponent = 0;
  NodePtr lhs;
  NodePtr rhs;
};

bool equal(const Node& l, const Node& r);

/// Value and first derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

using Parameters = std::map<std::string, double, std::less<>>;

/// A parsed coefficient expression in the single variable x.
///
/// Grammar, loosest binding first: + - (left), * / (left), unary -, ^
/// (right, integer exponents only), then numbers, x, bound parameters,
/// parenthesised expressions and calls exp ln sin cos sqrt arctan.
class Expression {
 public:
  /// Throws ParseError with the byte offset and the set of tokens that would
  /// have been accepted there.
  static Expression parse(std::string_view text, const Parameters& params = {});

  /// Fully parenthesised; parses back to an equal tree under the same
  /// parameters.
  std::string unparse() const;

  double eval(double x) const;
  Dual eval_dual(double x) const;

  const Node& root() const { return *root_; }
  bool operator==(const Expression& other) const { return equal(*root_, *other.root_); }

  /// Leaf function with dual-number derivative; non-finite values raise
  /// SingularityError naming `name`.
  ScalarFunction to_function(std::string name, Interval domain = {}) const;

 private:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

}  // namespace abelkit::expr
