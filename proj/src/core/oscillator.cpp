#include "abelkit/oscillator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "abelkit/abel.hpp"
#include "abelkit/errors.hpp"
#include "abelkit/numerics.hpp"
#include "abelkit/vein.hpp"

namespace abelkit::oscillator {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool close_rel(cplx got, cplx want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

double k_param(double a, double b) { return a * a + a * b + b * b; }

struct PoleHit {};

}  // namespace

double VeinOscillator::h3_reduced(double x) const {
  const double q = x * x + (a + b) * x + a * a - a * b + b * b;
  const double d = b * x + a * a;
  const double d2 = d * d;
  return q / (d2 * d2 * d);
}

VeinOscillator build(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("oscillator parameters must be finite");
  if (a == 0.0 && b == 0.0) throw InvalidInput("oscillator needs (a, b) != (0, 0)");
  VeinOscillator osc;
  osc.a = a;
  osc.b = b;
  std::vector<double> poles;
  if (b != 0.0) {
    osc.pole = -a * a / b;
    poles.push_back(*osc.pole);
  }
  const Polynomial D{{a * a, b}};
  osc.h2 = Rational(Polynomial{{3 * b * b, 3 * a}}, D.pow(3));
  osc.h3 = Rational(Polynomial{{-a * a * a - b * b * b, -3 * a * b, 0.0, 1.0}}, D.pow(5));
  osc.h2_fn = osc.h2.function("h2", poles);
  osc.h3_fn = osc.h3.function("h3", poles);

  // cross-check against removing the linear term of the Abel equation, on
  // the pole-free side that holds the real fixed point
  Interval side{};
  if (osc.pole) {
    side = (a + b < *osc.pole) ? Interval{side.lo, *osc.pole} : Interval{*osc.pole, side.hi};
  }
  const vein::VeinEquation eq = vein::vein_equation({a, b, 1.0}, side);
  const double anchor = eq.equation.domain.anchor;
  const double d0 = b * anchor + a * a;
  const LinearElimination elim = eliminate_linear(eq.equation, 1.0 / (d0 * d0));
  for (double x : eq.equation.grid(6, 1e-3)) {
    const double h2 = osc.h2(x);
    const double h3 = osc.h3(x);
    const double e2 = elim.reduced.f2(x);
    const double e3 = elim.reduced.f3(x);
    if (std::abs(h2 - e2) > 1e-8 * std::max(1.0, std::abs(h2)) ||
        std::abs(h3 - e3) > 1e-8 * std::max(1.0, std::abs(h3))) {
      throw InternalConsistencyError("oscillator coefficients disagree with the reduced Abel "
                                     "equation at x = " + fmt(x));
    }
  }
  return osc;
}

std::pair<double, double> vector_field(const VeinOscillator& osc, double x, double v) {
  return {v, -osc.h2_fn(x) * v - osc.h3_fn(x)};
}

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::stable_spiral: return "stable spiral";
    case Classification::unstable_spiral: return "unstable spiral";
    case Classification::stable_node: return "stable node";
    case Classification::unstable_node: return "unstable node";
    case Classification::saddle: return "saddle";
    case Classification::center: return "center (linear)";
    case Classification::degenerate: return "degenerate";
    case Classification::no_conclusion: return "no conclusion (complex data)";
  }
  return "unknown";
}

Classification classify(double delta1, double delta2) {
  if (delta2 < 0.0) return Classification::saddle;
  if (delta2 == 0.0) return Classification::degenerate;
  const double disc = delta1 * delta1 - 4.0 * delta2;
  if (disc < 0.0) {
    if (delta1 < 0.0) return Classification::stable_spiral;
    if (delta1 > 0.0) return Classification::unstable_spiral;
    return Classification::center;
  }
  if (delta1 < 0.0) return Classification::stable_node;
  if (delta1 > 0.0) return Classification::unstable_node;
  return Classification::degenerate;
}

std::array<cplx, 2> eigenvalues(cplx delta1, cplx delta2) {
  const cplx root = std::sqrt(delta1 * delta1 - 4.0 * delta2);
  return {(delta1 + root) / 2.0, (delta1 - root) / 2.0};
}

FixedPointReport classify_real(double a, double b) {
  if (a == 0.0 && b == 0.0) throw InvalidInput("degenerate parameters: (a, b) = (0, 0)");
  const double K = k_param(a, b);
  const double K2 = K * K;
  FixedPointReport r;
  r.location = a + b;
  r.delta1 = -3.0 / K2;
  r.delta2 = 3.0 / (K2 * K2);
  r.discriminant = r.delta1 * r.delta1 - 4.0 * r.delta2;
  const double mu = -3.0 / (2.0 * K2);
  const double nu = std::numbers::sqrt3 / (2.0 * K2);
  r.eigenvalues = {cplx(mu, nu), cplx(mu, -nu)};
  r.classification = classify(r.delta1.real(), r.delta2.real());

  const VeinOscillator osc = build(a, b);
  const double x = a + b;
  const double n1 = -osc.h2(x);
  const double n2 = osc.h3.derivative(x);
  if (!close_rel(n1, r.delta1, 1e-9) || !close_rel(n2, r.delta2, 1e-9)) {
    throw InternalConsistencyError("closed-form delta1/delta2 disagree with the coefficients at "
                                   "the real fixed point");
  }
  return r;
}

std::array<FixedPointReport, 2> classify_complex(double a, double b) {
  const double d = a * a * a - b * b * b;
  if (d == 0.0) throw InvalidInput("degenerate parameters: a^3 = b^3 leaves no complex pair");
  const double s3 = std::numbers::sqrt3;
  const double d2 = d * d;
  const cplx delta1 = 3.0 / (2.0 * d2) * cplx(a * a - 2 * a * b - 2 * b * b, s3 * a * (a + 2 * b));
  const double a2 = a * a;
  const double b2 = b * b;
  const cplx delta2 =
      3.0 / (2.0 * d2 * d2) *
      cplx(-a2 * a2 - 8 * a2 * a * b - 6 * a2 * b2 + 4 * a * b2 * b + 2 * b2 * b2,
           s3 * a * (a2 * a - 6 * a * b2 - 4 * b2 * b));
  const cplx C(-(a + b) / 2.0, -s3 * (a - b) / 2.0);

  const VeinOscillator osc = build(a, b);
  if (!close_rel(-osc.h2(C), delta1, 1e-8) || !close_rel(osc.h3.derivative(C), delta2, 1e-8)) {
    throw InternalConsistencyError("closed-form complex delta1/delta2 disagree with the "
                                   "coefficients at the complex fixed point");
  }

  std::array<FixedPointReport, 2> out;
  for (int k = 0; k < 2; ++k) {
    FixedPointReport& r = out[k];
    r.location = k == 0 ? C : std::conj(C);
    r.delta1 = k == 0 ? delta1 : std::conj(delta1);
    r.delta2 = k == 0 ? delta2 : std::conj(delta2);
    r.discriminant = r.delta1 * r.delta1 - 4.0 * r.delta2;
    r.eigenvalues = eigenvalues(r.delta1, r.delta2);
    r.classification = Classification::no_conclusion;
  }
  return out;
}

std::vector<FixedPointReport> fixed_points(double a, double b) {
  FixedPointReport real = classify_real(a, b);
  if (a == b) {
    real.collapsed = true;
    return {real};
  }
  const auto pair = classify_complex(a, b);
  return {real, pair[0], pair[1]};
}

std::pair<double, double> linearized_solution(double a, double b, double c1, double c2,
                                              double zeta) {
  if (a == 0.0 && b == 0.0) throw InvalidInput("degenerate parameters: (a, b) = (0, 0)");
  const double K = k_param(a, b);
  const double K2 = K * K;
  const double mu = 3.0 / (2.0 * K2);
  const double theta = std::numbers::sqrt3 * zeta / (2.0 * K2);
  const double damp = std::exp(-mu * zeta);
  const double x = damp * (c1 * std::cos(theta) + c2 * std::sin(theta));
  const double w = std::numbers::sqrt3 / K2;
  const double v = -w * damp *
                   (c1 * std::sin(theta + std::numbers::pi / 3) -
                    c2 * std::cos(theta + std::numbers::pi / 3));
  return {x, v};
}

double linear_period(double a, double b) {
  const double K = k_param(a, b);
  return 4.0 * std::numbers::pi * K * K / std::numbers::sqrt3;
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::range_exit: return "range_exit";
    case Termination::pole_proximity: return "pole_proximity";
    case Termination::step_limit: return "step_limit";
    case Termination::converged: return "converged";
  }
  return "unknown";
}

Trajectory integrate(const VeinOscillator& osc, double x0, double v0, double zeta_max,
                     const IntegrateOptions& opt) {
  if (!std::isfinite(x0) || !std::isfinite(v0)) throw InvalidInput("initial state must be finite");
  if (!(zeta_max > 0.0) || !std::isfinite(zeta_max)) {
    throw InvalidInput("zeta_max must be positive and finite");
  }
  if (osc.pole && std::abs(x0 - *osc.pole) < opt.pole_radius) {
    throw SingularityError("h2", *osc.pole, "initial state is at the pole x = " + fmt(*osc.pole));
  }
  const double xs = osc.real_fixed_point();
  const double dir = opt.backward ? -1.0 : 1.0;

  auto system = [&](const std::array<double, 2>& s, std::array<double, 2>& ds, double) {
    const double x = xs + s[0];
    const double h2 = osc.h2(x);
    const double h3 = s[0] * osc.h3_reduced(x);
    ds[0] = dir * s[1];
    ds[1] = dir * (-h2 * s[1] - h3);
    if (!std::isfinite(ds[0]) || !std::isfinite(ds[1])) throw PoleHit{};
  };

  std::vector<double> hits;
  for (double z : opt.sample_at) {
    if (z > 0.0 && z <= zeta_max) hits.push_back(z);
  }
  require_increasing(hits, "sample_at");

  Trajectory out;
  const bool sampled = !opt.sample_at.empty();
  std::size_t next = 0;
  auto record = [&](double t, double u, double v) {
    out.points.push_back({t, xs + u, v});
  };
  if (!sampled || opt.sample_at.front() <= 0.0) record(0.0, x0 - xs, v0);

  std::array<double, 2> state{x0 - xs, v0};
  Termination reason = Termination::completed;
  auto observer = [&](double t, const std::array<double, 2>& s) {
    const double x = xs + s[0];
    bool at_sample = false;
    double zt = t;
    if (sampled) {
      while (next < hits.size() && hits[next] < t - 1e-12 * std::max(1.0, t)) ++next;
      if (next < hits.size() && std::abs(hits[next] - t) <= 1e-12 * std::max(1.0, t)) {
        at_sample = true;
        zt = hits[next++];
      }
    }
    Termination stop = Termination::completed;
    if (osc.pole && std::abs(x - *osc.pole) < opt.pole_radius) {
      stop = Termination::pole_proximity;
    } else if (!opt.x_range.contains(x) || !opt.v_range.contains(s[1])) {
      stop = Termination::range_exit;
    } else if (opt.converge_radius > 0.0 && std::hypot(s[0], s[1]) < opt.converge_radius) {
      stop = Termination::converged;
    }
    if (!sampled || at_sample || stop != Termination::completed) record(zt, s[0], s[1]);
    if (stop != Termination::completed) {
      reason = stop;
      return false;
    }
    return true;
  };

  numerics::OdeOptions ode;
  ode.rel_tol = opt.rel_tol;
  ode.abs_tol = opt.abs_tol;
  ode.max_steps = opt.max_steps;
  ode.fixed_step = opt.fixed_step;
  try {
    const auto status = numerics::integrate_dopri5<2>(system, state, 0.0, zeta_max, ode, observer,
                                                      std::span<const double>(hits));
    if (status == numerics::OdeStop::step_limit) reason = Termination::step_limit;
  } catch (const PoleHit&) {
    reason = Termination::pole_proximity;
  }
  out.reason = reason;

  if (opt.backward) {
    std::reverse(out.points.begin(), out.points.end());
    for (auto& p : out.points) p.zeta = -p.zeta;
    // -0.0 prints as "-0"
    for (auto& p : out.points) {
      if (p.zeta == 0.0) p.zeta = 0.0;
    }
  }
  return out;
}

std::pair<Interval, Interval> default_window(double a, double b) {
  const double xs = a + b;
  double half = 1.0;
  if (b != 0.0) half = std::min(1.0, 0.9 * std::abs(xs + a * a / b));
  return {{xs - half, xs + half}, {-1.0, 1.0}};
}

PortraitData portrait_data(const VeinOscillator& osc, Interval x_window, Interval v_window,
                           const PortraitOptions& opt) {
  for (const Interval* w : {&x_window, &v_window}) {
    if (!std::isfinite(w->lo) || !std::isfinite(w->hi) || !(w->lo < w->hi)) {
      throw InvalidInput("portrait window must be finite and non-empty");
    }
  }
  if (opt.grid_x == 0 || opt.grid_v == 0) throw InvalidInput("portrait grid must be non-empty");
  if (opt.samples_per_direction < 2 || opt.curve_samples < 2) {
    throw InvalidInput("sample counts must be at least 2");
  }
  if (osc.pole && *osc.pole >= x_window.lo - 1e-6 && *osc.pole <= x_window.hi + 1e-6) {
    throw InvalidInput("portrait x-window must stay 1e-6 clear of the pole x = " + fmt(*osc.pole));
  }

  PortraitData out;
  const double zeta_max = opt.zeta_max > 0.0 ? opt.zeta_max : linear_period(osc.a, osc.b);
  IntegrateOptions io;
  io.x_range = x_window;
  io.v_range = v_window;
  io.sample_at = linspace(0.0, zeta_max, opt.samples_per_direction);

  const std::size_t n = opt.grid_x * opt.grid_v;
  out.trajectories.resize(n);
  const double wx = (x_window.hi - x_window.lo) / static_cast<double>(opt.grid_x);
  const double wv = (v_window.hi - v_window.lo) / static_cast<double>(opt.grid_v);

  auto run_seed = [&](std::size_t id) {
    const std::size_t i = id / opt.grid_v;
    const std::size_t j = id % opt.grid_v;
    const double x0 = x_window.lo + (static_cast<double>(i) + 0.5) * wx;
    const double v0 = v_window.lo + (static_cast<double>(j) + 0.5) * wv;
    IntegrateOptions back = io;
    back.backward = true;
    const Trajectory fwd = integrate(osc, x0, v0, zeta_max, io);
    const Trajectory bwd = integrate(osc, x0, v0, zeta_max, back);
    SeedTrajectory st{id, x0, v0, bwd.points, fwd.reason, bwd.reason};
    for (const auto& p : fwd.points) {
      if (!st.points.empty() && p.zeta <= st.points.back().zeta) continue;
      st.points.push_back(p);
    }
    out.trajectories[id] = std::move(st);
  };

  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t id = cursor++; id < n && !failed; id = cursor++) {
      try {
        run_seed(id);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const auto xs = linspace(x_window.lo, x_window.hi, opt.curve_samples);
  for (double x : xs) {
    const double h2 = osc.h2(x);
    if (h2 == 0.0) continue;
    const double v = -osc.h3(x) / h2;
    if (v >= v_window.lo && v <= v_window.hi) out.isoclines.push_back({"v_nullcline", x, v});
  }
  for (double x : xs) out.isoclines.push_back({"x_nullcline", x, 0.0});
  for (double x : xs) out.coefficients.push_back({x, osc.h2(x), osc.h3(x)});
  out.fixed_points = fixed_points(osc.a, osc.b);
  return out;
}

}  // namespace abelkit::oscillator
