#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abelkit/rational.hpp"
#include "abelkit/scalar_function.hpp"

namespace abelkit::oscillator {

using cplx = std::complex<double>;

/// x'' + h2(x) x' + h3(x) = 0 with h2 = 3(ax+b^2)/(bx+a^2)^3 and
/// h3 = (x^3 - 3abx - a^3 - b^3)/(bx+a^2)^5.
struct VeinOscillator {
  double a = 0.0;
  double b = 0.0;
  Rational h2{Polynomial{{0.0}}, Polynomial{{1.0}}};
  Rational h3{Polynomial{{0.0}}, Polynomial{{1.0}}};
  ScalarFunction h2_fn;
  ScalarFunction h3_fn;
  /// x = -a^2/b for b != 0.
  std::optional<double> pole;

  double real_fixed_point() const { return a + b; }
  /// h3 with the real root factored out: h3(x) = (x - (a+b)) * h3_reduced(x).
  double h3_reduced(double x) const;
};

/// Throws InvalidInput for (a, b) = (0, 0) and InternalConsistencyError when
/// the coefficients disagree with eliminating the linear term of the Abel
/// equation.
VeinOscillator build(double a, double b);

/// (v, -h2(x) v - h3(x)).
std::pair<double, double> vector_field(const VeinOscillator& osc, double x, double v);

enum class Classification {
  stable_spiral,
  unstable_spiral,
  stable_node,
  unstable_node,
  saddle,
  center,
  degenerate,
  no_conclusion,
};

const char* to_string(Classification c) noexcept;

/// Trace-determinant chart for lambda^2 - delta1 lambda + delta2 = 0.
Classification classify(double delta1, double delta2);

/// Roots of lambda^2 - delta1 lambda + delta2 = 0.
std::array<cplx, 2> eigenvalues(cplx delta1, cplx delta2);

struct FixedPointReport {
  /// x*; v* is always 0.
  cplx location;
  cplx delta1;
  cplx delta2;
  cplx discriminant;
  Classification classification = Classification::no_conclusion;
  std::array<cplx, 2> eigenvalues;
  /// a = b: the three fixed points coincide.
  bool collapsed = false;
};

/// delta1 = -h2(a+b), delta2 = dh3/dx(a+b) from the closed forms in
/// K = a^2 + ab + b^2, cross-checked against the rational coefficients.
FixedPointReport classify_real(double a, double b);

/// The pair alpha +- i beta with alpha = -(a+b)/2, beta = -sqrt3 (a-b)/2,
/// from closed forms, cross-checked against complex evaluation. Throws
/// InvalidInput when a^3 = b^3.
std::array<FixedPointReport, 2> classify_complex(double a, double b);

/// Real point first, then the complex pair; a single collapsed report when
/// a = b.
std::vector<FixedPointReport> fixed_points(double a, double b);

/// (x~, v~) about the real fixed point:
/// x~ = e^{-mu z} (c1 cos(nu z) + c2 sin(nu z)), v~ = dx~/dz, with
/// mu = 3/(2K^2), nu = sqrt3/(2K^2).
std::pair<double, double> linearized_solution(double a, double b, double c1, double c2, double zeta);

/// Linear period 4 pi K^2 / sqrt3.
double linear_period(double a, double b);

// --- trajectories -----------------------------------------------------------------

enum class Termination { completed, range_exit, pole_proximity, step_limit, converged };

const char* to_string(Termination t) noexcept;

struct TrajectoryPoint {
  double zeta;
  double x;
  double v;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Termination reason = Termination::completed;
};

struct IntegrateOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Fixed-step Dormand-Prince (no error control) when set.
  std::optional<double> fixed_step;
  std::size_t max_steps = 1'000'000;
  Interval x_range{-1e6, 1e6};
  Interval v_range{-1e6, 1e6};
  double pole_radius = 1e-6;
  /// Stop within this distance of the real fixed point (0 disables).
  double converge_radius = 1e-10;
  /// Record only these zeta values (ascending, landed on exactly); every
  /// accepted step is recorded when empty.
  std::vector<double> sample_at;
  /// Integrate the negated field; zeta values are reported negated and in
  /// ascending order.
  bool backward = false;
};

/// Dormand-Prince 5(4) in coordinates offset from the real fixed point.
/// Throws SingularityError when (x0, v0) starts within pole_radius of the pole.
Trajectory integrate(const VeinOscillator& osc, double x0, double v0, double zeta_max,
                     const IntegrateOptions& opt = {});

// --- portrait data ------------------------------------------------------------------

struct SeedTrajectory {
  std::size_t seed_id;
  double x0;
  double v0;
  /// Backward part (negative zeta) followed by the forward part.
  std::vector<TrajectoryPoint> points;
  Termination forward_reason;
  Termination backward_reason;
};

struct IsoclinePoint {
  /// "v_nullcline" (h2 v + h3 = 0) or "x_nullcline" (v = 0).
  std::string kind;
  double x;
  double v;
};

struct CoefficientSample {
  double x;
  double h2;
  double h3;
};

struct PortraitOptions {
  std::size_t grid_x = 5;
  std::size_t grid_v = 5;
  double zeta_max = 0.0;  // 0: one linear period
  std::size_t samples_per_direction = 201;
  std::size_t curve_samples = 401;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct PortraitData {
  std::vector<SeedTrajectory> trajectories;
  std::vector<IsoclinePoint> isoclines;
  std::vector<CoefficientSample> coefficients;
  std::vector<FixedPointReport> fixed_points;
};

/// Default window: v in [-1, 1], x centred on the real fixed point with half
/// width min(1, 0.9 |x* - pole|).
std::pair<Interval, Interval> default_window(double a, double b);

/// Seeds at cell centres of the grid; each seed is integrated forward and
/// backward (range exit at the window edge). Throws InvalidInput for an
/// empty window or one that reaches within 1e-6 of the pole.
PortraitData portrait_data(const VeinOscillator& osc, Interval x_window, Interval v_window,
                           const PortraitOptions& opt = {});

}  // namespace abelkit::oscillator
