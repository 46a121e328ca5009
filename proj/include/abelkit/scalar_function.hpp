#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace abelkit {

/// Exclusion radius around declared singular points.
inline constexpr double kSingularityRadius = 1e-9;

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const;
  bool operator==(const Interval&) const = default;
};

/// A real function of one real variable, evaluable together with its first
/// derivative.
///
/// Instances are immutable and cheap to copy (shared implementation). Leaf
/// functions refuse evaluation within kSingularityRadius of a declared
/// singular point and raise SingularityError naming themselves; composite
/// functions inherit the union of their operands' singular points and let the
/// operands do the guarding, so errors always name the offending leaf.
class ScalarFunction {
 public:
  using Map = std::function<double(double)>;

  /// Identically zero.
  ScalarFunction();
  ScalarFunction(std::string name, Map value, Map deriv,
                 std::vector<double> singularities = {}, Interval domain = {});

  static ScalarFunction constant(double c, std::string name = {});
  static ScalarFunction identity(std::string name = "x");
  /// Derivative by central differences, h = max(1e-6, 1e-6|x|).
  static ScalarFunction with_numeric_derivative(std::string name, Map value,
                                                std::vector<double> singularities = {},
                                                Interval domain = {});

  double operator()(double x) const;
  double derivative(double x) const;
  /// The derivative as a function in its own right; its derivative falls
  /// back to central differences.
  ScalarFunction derivative_function() const;

  const std::string& name() const;
  ScalarFunction named(std::string name) const;
  const std::vector<double>& singularities() const;
  const Interval& domain() const;
  ScalarFunction on(Interval domain) const;

  /// Set when the function is a structural constant (built by constant() or
  /// folded from constants).
  std::optional<double> constant_value() const;
  bool is_zero() const;
  /// Anchor point of an antiderivative; empty for other functions.
  std::optional<double> anchor() const;

  bool near_singularity(double x, double radius = kSingularityRadius) const;

 private:
  struct Impl;
  explicit ScalarFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;

  friend ScalarFunction make_composite(std::string, Map, Map, std::vector<double>, Interval,
                                       std::optional<double>);
  friend ScalarFunction antiderivative(const ScalarFunction&, double, double);
};

ScalarFunction operator+(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator-(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator*(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator/(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction operator-(const ScalarFunction& f);
ScalarFunction operator*(double c, const ScalarFunction& f);
ScalarFunction exp(const ScalarFunction& f);
ScalarFunction pow(const ScalarFunction& f, int n);
ScalarFunction sqrt(const ScalarFunction& f);

/// x -> integral of f from `anchor` to x, by adaptive Gauss-Kronrod bisection
/// to absolute tolerance `abs_tol`. The integration path must stay clear of
/// f's singular points.
ScalarFunction antiderivative(const ScalarFunction& f, double anchor, double abs_tol = 1e-10);

/// exp(integral of f from anchor), scaled so that its value at the anchor is
/// `value_at_anchor`.
ScalarFunction exp_antiderivative(const ScalarFunction& f, double anchor,
                                  double value_at_anchor = 1.0, double abs_tol = 1e-10);

/// True when f is a structural zero, or |f| <= tol at every grid point.
bool vanishes_on(const ScalarFunction& f, const std::vector<double>& grid, double tol = 1e-12);

}  // namespace abelkit
