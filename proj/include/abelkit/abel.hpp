#pragma once

#include <optional>
#include <span>
#include <vector>

#include "abelkit/scalar_function.hpp"

namespace abelkit {

/// Open working interval plus the anchor that fixes every indefinite
/// integral taken over it.
struct Domain {
  Interval interval;
  double anchor = 0.0;

  /// Anchor at the midpoint (or near 0 / one unit inside a half-infinite
  /// side), moved by golden-ratio steps until it is clear of `singular`.
  static Domain make(double lo, double hi, std::span<const double> singular = {});

  bool contains(double x) const { return interval.contains(x); }
  /// Finite part of the interval used for sampling: infinite ends are
  /// clipped to anchor -/+ 8.
  Interval working() const;
  /// n evenly spaced interior points of working(), skipping points closer
  /// than `clearance` to any singular point.
  std::vector<double> grid(std::size_t n, std::span<const double> singular = {},
                           double clearance = 1e-6) const;
};

/// dy/dx = f0 + f1 y + f2 y^2 + f3 y^3.
struct AbelFirstKind {
  ScalarFunction f0, f1, f2, f3;
  Domain domain;

  static AbelFirstKind make(ScalarFunction f0, ScalarFunction f1, ScalarFunction f2,
                            ScalarFunction f3, Interval interval = {});
  static AbelFirstKind constant(double a0, double a1, double a2, double a3,
                                Interval interval = {});

  std::vector<double> singularities() const;
  /// Same coefficients on a sub-interval, with a fresh anchor inside it.
  AbelFirstKind restricted(double lo, double hi) const;
  std::vector<double> grid(std::size_t n, double clearance = 1e-6) const;
};

/// (w + s) dw/dx + p + q1 w + q2 w^2 + r w^3 = 0.
struct AbelSecondKind {
  ScalarFunction p, q1, q2, r, s;
  Interval domain;
};

/// x'' + c2(x) x' + c3(x) + c1(x) x'^2 + c0(x) x'^3 = 0 (primes: d/dzeta).
struct OscillatorForm {
  ScalarFunction c0, c1, c2, c3;
};

struct CurvePoint {
  double x;
  double y;
};

/// Samples (x, y) with strictly increasing abscissae.
class SampledCurve {
 public:
  SampledCurve() = default;
  explicit SampledCurve(std::vector<CurvePoint> points);

  const std::vector<CurvePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const CurvePoint& operator[](std::size_t i) const { return points_[i]; }
  std::vector<double> xs() const;
  std::vector<double> ys() const;

 private:
  std::vector<CurvePoint> points_;
};

/// Strictly increasing targets, or InvalidInput.
void require_increasing(std::span<const double> xs, const char* what);
/// n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// The substitution 1/y = w + s.
AbelFirstKind second_to_first(const AbelSecondKind& eq);

double rhs(const AbelFirstKind& eq, double x, double y);

struct LinearElimination {
  /// (h0, 0, h2, h3).
  AbelFirstKind reduced;
  /// E = exp(integral f1); solutions map back by y = z E.
  ScalarFunction multiplier;
};

/// y = z E removes the linear term. `multiplier_at_anchor` fixes the free
/// constant of E (default E(anchor) = 1).
LinearElimination eliminate_linear(const AbelFirstKind& eq,
                                   std::optional<double> multiplier_at_anchor = {});

/// Abel first kind <-> second-order oscillator: c_i = f_i.
OscillatorForm oscillator_from_abel(const AbelFirstKind& eq);
AbelFirstKind abel_from_oscillator(const OscillatorForm& osc, Domain domain);

/// dz/dx = h0 + h2 z^2 for equations with f3 = 0.
struct RiccatiReduction {
  ScalarFunction h0;
  ScalarFunction h2;
  ScalarFunction multiplier;
};

RiccatiReduction reduce_to_riccati(const AbelFirstKind& eq);

/// max |dy/dx - rhs(x, y)| over the curve, dy/dx from finite-difference
/// stencils: 5 centred nodes inside, 7 nodes at the two points nearest each end.
double residual(const AbelFirstKind& eq, const SampledCurve& curve);

/// Pointwise residuals, same stencils as residual().
std::vector<double> residuals(const AbelFirstKind& eq, const SampledCurve& curve);

}  // namespace abelkit
