#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

namespace abelkit::numerics {

// --- quadrature -------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Adaptive 15-point Gauss-Kronrod with interval bisection until the summed
/// error estimate is below `abs_tol`. Throws QuadratureError when the depth
/// limit is hit or the integrand is not finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, int max_depth = 48);

// --- roots ------------------------------------------------------------------

struct RootOptions {
  /// Convergence when |step| < rel_step * max(1, |x|).
  double rel_step = 1e-14;
  int max_newton = 50;
  int max_iterations = 400;
};

/// f returns (value, derivative).
using ValueAndSlope = std::function<std::pair<double, double>(double)>;

/// Newton iteration safeguarded by a sign-change bracket [lo, hi]: any Newton
/// step leaving the bracket, or failing to halve the residual, is replaced by
/// bisection. Requires f(lo) and f(hi) of opposite sign (or one of them 0).
double solve_bracketed(const ValueAndSlope& f, double lo, double hi,
                       std::optional<double> guess = {}, const RootOptions& opt = {});

/// Plain bisection on a sign change, to |hi - lo| <= tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iterations = 300);

// --- finite differences -----------------------------------------------------

/// Weights for the first derivative at `at` from values on `nodes`
/// (Fornberg's recursion; nodes need not be uniform).
std::vector<double> derivative_weights(double at, std::span<const double> nodes);

/// Derivative of sampled data at every node: 5-point centred stencils in the
/// interior, 7 nodes (when available) at the two points nearest each end.
/// Requires >= 5 points.
std::vector<double> sampled_derivative(std::span<const double> xs, std::span<const double> ys);

// --- ODE integration ----------------------------------------------------------

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  std::size_t max_steps = 1'000'000;
  /// When set, take fixed Dormand-Prince steps of this size (no error control).
  std::optional<double> fixed_step;
};

enum class OdeStop { reached_end, stopped_by_observer, step_limit };

/// Dormand-Prince 5(4) from t0 to t1 (t1 > t0). `observer(t, y)` runs after
/// every accepted step and returns false to stop. Output times in
/// `hit_times` (ascending, within (t0, t1]) are landed on exactly.
template <std::size_t N, class System, class Observer>
OdeStop integrate_dopri5(System&& system, std::array<double, N>& y, double t0, double t1,
                         const OdeOptions& opt, Observer&& observer,
                         std::span<const double> hit_times = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  auto rhs = [&system](const State& s, State& ds, double t) { system(s, ds, t); };

  double t = t0;
  std::size_t steps = 0;
  std::size_t next_hit = 0;
  while (next_hit < hit_times.size() && hit_times[next_hit] <= t0) ++next_hit;

  auto landing = [&](double dt) {
    double stop = t1;
    if (next_hit < hit_times.size()) stop = std::min(stop, hit_times[next_hit]);
    return std::min(dt, stop - t);
  };
  auto after_step = [&]() {
    while (next_hit < hit_times.size() && hit_times[next_hit] <= t + 1e-14 * std::abs(t)) {
      ++next_hit;
    }
  };

  if (opt.fixed_step) {
    odeint::runge_kutta_dopri5<State> stepper;
    while (t < t1) {
      if (++steps > opt.max_steps) return OdeStop::step_limit;
      const double dt = landing(*opt.fixed_step);
      stepper.do_step(rhs, y, t, dt);
      t = (dt == t1 - t) ? t1 : t + dt;
      after_step();
      if (!observer(t, y)) return OdeStop::stopped_by_observer;
    }
    return OdeStop::reached_end;
  }

  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  double dt = opt.initial_step;
  while (t < t1) {
    if (++steps > opt.max_steps) return OdeStop::step_limit;
    const double clamp = landing(dt);
    const bool clamped = clamp < dt;
    double trial = clamp;
    const double target = t + clamp;
    odeint::controlled_step_result r;
    int rejections = 0;
    do {
      r = stepper.try_step(rhs, y, t, trial);
      if (++rejections > 200) return OdeStop::step_limit;
    } while (r == odeint::fail);
    // try_step advanced t and proposed the next trial size in `trial`.
    if (clamped && std::abs(t - target) <= 1e-15 * std::max(1.0, std::abs(target))) t = target;
    dt = clamped ? std::max(dt, trial) : trial;
    after_step();
    if (!observer(t, y)) return OdeStop::stopped_by_observer;
  }
  return OdeStop::reached_end;
}

}  // namespace abelkit::numerics
