#include "abelkit/abel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "abelkit/errors.hpp"
#include "abelkit/numerics.hpp"

namespace abelkit {

namespace {

bool clear_of(double x, std::span<const double> singular, double radius) {
  return std::none_of(singular.begin(), singular.end(),
                      [&](double s) { return std::abs(x - s) < radius; });
}

std::vector<double> union_of(std::initializer_list<const ScalarFunction*> fs) {
  std::vector<double> out;
  for (const auto* f : fs) out.insert(out.end(), f->singularities().begin(), f->singularities().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

// --- Domain -----------------------------------------------------------------

Domain Domain::make(double lo, double hi, std::span<const double> singular) {
  if (!(lo < hi)) throw InvalidInput("domain must satisfy lo < hi");
  double anchor = 0.0;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    anchor = 0.5 * (lo + hi);
  } else if (std::isfinite(lo)) {
    anchor = std::max(lo + 1.0, 0.0);
  } else if (std::isfinite(hi)) {
    anchor = std::min(hi - 1.0, 0.0);
  }
  const double width = std::isfinite(hi - lo) ? hi - lo : 2.0;
  const double clearance = std::min(1e-3, 1e-3 * width);
  double step = 0.1 * std::min(width, 2.0);
  int k = 0;
  double candidate = anchor;
  while (!clear_of(candidate, singular, clearance) || !(candidate > lo && candidate < hi)) {
    // golden-ratio relocation, alternating sides, shrinking when it leaves the interval
    ++k;
    const double offset = std::fmod(k * std::numbers::phi, 1.0) * step;
    candidate = anchor + ((k % 2) ? offset : -offset);
    if (k % 64 == 0) step *= 0.5;
    if (k > 4096) throw InvalidInput("could not place an anchor clear of the singular points");
  }
  return Domain{{lo, hi}, candidate};
}

Interval Domain::working() const {
  return {std::isfinite(interval.lo) ? interval.lo : anchor - 8.0,
          std::isfinite(interval.hi) ? interval.hi : anchor + 8.0};
}

std::vector<double> Domain::grid(std::size_t n, std::span<const double> singular,
                                 double clearance) const {
  const Interval w = working();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.lo + (w.hi - w.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    if (clear_of(x, singular, clearance)) out.push_back(x);
  }
  return out;
}

// --- AbelFirstKind ----------------------------------------------------------

AbelFirstKind AbelFirstKind::make(ScalarFunction f0, ScalarFunction f1, ScalarFunction f2,
                                  ScalarFunction f3, Interval interval) {
  AbelFirstKind eq{f0.named(f0.constant_value() ? f0.name() : "f0"),
                   f1.named(f1.constant_value() ? f1.name() : "f1"),
                   f2.named(f2.constant_value() ? f2.name() : "f2"),
                   f3.named(f3.constant_value() ? f3.name() : "f3"),
                   {}};
  const auto sing = eq.singularities();
  eq.domain = Domain::make(interval.lo, interval.hi, sing);
  return eq;
}

AbelFirstKind AbelFirstKind::constant(double a0, double a1, double a2, double a3,
                                      Interval interval) {
  return make(ScalarFunction::constant(a0), ScalarFunction::constant(a1),
              ScalarFunction::constant(a2), ScalarFunction::constant(a3), interval);
}

std::vector<double> AbelFirstKind::singularities() const { return union_of({&f0, &f1, &f2, &f3}); }

AbelFirstKind AbelFirstKind::restricted(double lo, double hi) const {
  AbelFirstKind out = *this;
  out.domain = Domain::make(lo, hi, singularities());
  return out;
}

std::vector<double> AbelFirstKind::grid(std::size_t n, double clearance) const {
  return domain.grid(n, singularities(), clearance);
}

// --- SampledCurve -----------------------------------------------------------

SampledCurve::SampledCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].x > points_[i - 1].x)) {
      throw InvalidInput("curve abscissae must be strictly increasing");
    }
  }
}

std::vector<double> SampledCurve::xs() const {
  std::vector<double> out(points_.size());
  std::transform(points_.begin(), points_.end(), out.begin(), [](const CurvePoint& p) { return p.x; });
  return out;
}

std::vector<double> SampledCurve::ys() const {
  std::vector<double> out(points_.size());
  std::transform(points_.begin(), points_.end(), out.begin(), [](const CurvePoint& p) { return p.y; });
  return out;
}

void require_increasing(std::span<const double> xs, const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw InvalidInput(std::string(what) + ": targets must be strictly increasing");
    }
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidInput("linspace needs at least 2 points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

// --- operations ---------------------------------------------------------------

AbelFirstKind second_to_first(const AbelSecondKind& eq) {
  for (const ScalarFunction* f : {&eq.p, &eq.q1, &eq.q2, &eq.r, &eq.s}) {
    const Interval& d = f->domain();
    if (d.lo > eq.domain.lo || d.hi < eq.domain.hi) {
      throw InvalidInput("coefficient '" + f->name() + "' is not defined on the whole equation domain");
    }
  }
  const ScalarFunction& p = eq.p;
  const ScalarFunction& q1 = eq.q1;
  const ScalarFunction& q2 = eq.q2;
  const ScalarFunction& r = eq.r;
  const ScalarFunction& s = eq.s;
  const ScalarFunction ds = s.derivative_function();
  const ScalarFunction s2 = s * s;
  const ScalarFunction s3 = s2 * s;
  ScalarFunction f0 = r;
  ScalarFunction f1 = q2 - 3.0 * r * s;
  ScalarFunction f2 = q1 - ds - 2.0 * q2 * s + 3.0 * r * s2;
  ScalarFunction f3 = p - q1 * s + q2 * s2 - r * s3;
  return AbelFirstKind::make(f0, f1, f2, f3, eq.domain);
}

double rhs(const AbelFirstKind& eq, double x, double y) {
  if (!eq.domain.contains(x)) {
    throw InvalidInput("x = " + std::to_string(x) + " lies outside the equation domain");
  }
  for (double s : eq.singularities()) {
    if (std::abs(x - s) < kSingularityRadius) {
      const ScalarFunction* culprit = &eq.f0;
      for (const ScalarFunction* f : {&eq.f0, &eq.f1, &eq.f2, &eq.f3}) {
        if (f->near_singularity(x)) {
          culprit = f;
          break;
        }
      }
      throw SingularityError(culprit->name(), s,
                             "coefficient '" + culprit->name() + "' is singular at x = " +
                                 std::to_string(s));
    }
  }
  return eq.f0(x) + y * (eq.f1(x) + y * (eq.f2(x) + y * eq.f3(x)));
}

LinearElimination eliminate_linear(const AbelFirstKind& eq,
                                   std::optional<double> multiplier_at_anchor) {
  const double e0 = multiplier_at_anchor.value_or(1.0);
  if (eq.f1.is_zero() && e0 == 1.0) {
    return {eq, ScalarFunction::constant(1.0)};
  }
  const ScalarFunction E = exp_antiderivative(eq.f1, eq.domain.anchor, e0).named("E");
  AbelFirstKind out = eq;
  out.f0 = (eq.f0 / E).named("h0");
  out.f1 = ScalarFunction::constant(0.0);
  out.f2 = (eq.f2 * E).named("h2");
  out.f3 = (eq.f3 * E * E).named("h3");
  return {out, E};
}

OscillatorForm oscillator_from_abel(const AbelFirstKind& eq) {
  return {eq.f0, eq.f1, eq.f2, eq.f3};
}

AbelFirstKind abel_from_oscillator(const OscillatorForm& osc, Domain domain) {
  AbelFirstKind eq{osc.c0, osc.c1, osc.c2, osc.c3, domain};
  return eq;
}

RiccatiReduction reduce_to_riccati(const AbelFirstKind& eq) {
  if (!vanishes_on(eq.f3, eq.grid(32))) {
    throw PreconditionError("Riccati reduction needs f3 = 0 on the domain");
  }
  const LinearElimination el = eliminate_linear(eq);
  return {el.reduced.f0, el.reduced.f2, el.multiplier};
}

std::vector<double> residuals(const AbelFirstKind& eq, const SampledCurve& curve) {
  if (curve.size() < 5) throw InvalidInput("residual needs at least 5 curve points");
  const auto xs = curve.xs();
  const auto ys = curve.ys();
  const auto dy = numerics::sampled_derivative(xs, ys);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::abs(dy[i] - rhs(eq, xs[i], ys[i]));
  return out;
}

double residual(const AbelFirstKind& eq, const SampledCurve& curve) {
  const auto r = residuals(eq, curve);
  return *std::max_element(r.begin(), r.end());
}

}  // namespace abelkit
