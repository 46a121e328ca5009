#include "abelkit/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "abelkit/errors.hpp"
#include "abelkit/numerics.hpp"

namespace abelkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-10;

int sign_of(double v) { return (v > 0) - (v < 0); }

/// Solve F(y) = target on (lo, hi) where F is strictly monotone, starting
/// from `start` inside the interval. Ends may be infinite. The bracket is
/// grown geometrically toward the end that holds the root.
double invert_monotone(const std::function<double(double)>& F,
                       const std::function<double(double)>& dF, double lo, double hi,
                       double start, double target) {
  auto g = [&](double y) { return F(y) - target; };
  const double f0 = g(start);
  if (f0 == 0.0) return start;
  const bool increasing = dF(start) > 0;
  const bool go_right = (f0 < 0) == increasing;
  const double end = go_right ? hi : lo;

  double a = start;
  double b = start;
  double fb = f0;
  for (int k = 1; k < 2100; ++k) {
    double next;
    if (std::isfinite(end)) {
      next = end - (end - start) * std::ldexp(1.0, -k);
    } else {
      const double d = std::max(1.0, std::abs(start));
      next = start + (go_right ? 1.0 : -1.0) * d * std::ldexp(1.0, k);
    }
    if (next == end || next == b) return b;  // closest representable value
    const double fn = g(next);
    a = b;
    b = next;
    fb = fn;
    if (sign_of(fb) != sign_of(f0)) break;
    if (k == 2099) return b;
  }
  if (fb == 0.0) return b;
  const auto value_slope = [&](double y) { return std::pair{g(y), dF(y)}; };
  return numerics::solve_bracketed(value_slope, a, b);
}

double cubic_value(double a2, double a1, double a0, double y) { return ((y + a2) * y + a1) * y + a0; }

double polish(double a2, double a1, double a0, double y) {
  for (int i = 0; i < 4; ++i) {
    const double p = cubic_value(a2, a1, a0, y);
    const double dp = (3.0 * y + 2.0 * a2) * y + a1;
    if (dp == 0.0) break;
    const double next = y - p / dp;
    if (!std::isfinite(next) || std::abs(cubic_value(a2, a1, a0, next)) >= std::abs(p)) break;
    y = next;
  }
  return y;
}

}  // namespace

const char* to_string(RootCase c) noexcept {
  switch (c) {
    case RootCase::three_distinct_real: return "three_distinct_real";
    case RootCase::double_and_simple_real: return "double_and_simple_real";
    case RootCase::triple_real: return "triple_real";
    case RootCase::real_and_complex_pair: return "real_and_complex_pair";
  }
  return "unknown";
}

CubicRoots classify_cubic(double a2, double a1, double a0) {
  const double scale = std::max({1.0, std::abs(a2), std::sqrt(std::abs(a1)), std::cbrt(std::abs(a0))});
  const double b2 = a2 / scale;
  const double b1 = a1 / (scale * scale);
  const double b0 = a0 / (scale * scale * scale);
  const double disc = 18.0 * b2 * b1 * b0 - 4.0 * b2 * b2 * b2 * b0 + b2 * b2 * b1 * b1 -
                      4.0 * b1 * b1 * b1 - 27.0 * b0 * b0;
  // depressed cubic t^3 + p t + q with y = t - b2/3 (scaled units)
  const double p = b1 - b2 * b2 / 3.0;
  const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
  const double shift = -b2 / 3.0;

  CubicRoots out{};
  out.scaled_discriminant = disc;

  if (std::abs(disc) <= kTie) {
    if (std::abs(p) <= kTie) {
      out.kind = RootCase::triple_real;
      const double r = polish(a2, a1, a0, shift * scale);
      out.real = {-a2 / 3.0};
      out.simple = out.repeated = out.real[0];
      (void)r;
      return out;
    }
    out.kind = RootCase::double_and_simple_real;
    out.simple = polish(a2, a1, a0, (3.0 * q / p + shift) * scale);
    // repeated root from Vieta: simple + 2 repeated = -a2
    out.repeated = 0.5 * (-a2 - out.simple);
    out.real = {std::min(out.simple, out.repeated), std::max(out.simple, out.repeated)};
    return out;
  }

  if (disc > 0) {
    out.kind = RootCase::three_distinct_real;
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
      out.real.push_back(polish(a2, a1, a0, (t + shift) * scale));
    }
    std::sort(out.real.begin(), out.real.end());
    return out;
  }

  out.kind = RootCase::real_and_complex_pair;
  const double d = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  const double t = std::cbrt(-q / 2.0 + d) + std::cbrt(-q / 2.0 - d);
  const double r = polish(a2, a1, a0, (t + shift) * scale);
  out.real = {r};
  // y^3 + a2 y^2 + a1 y + a0 = (y - r)(y^2 + c1 y + c0)
  const double c1 = a2 + r;
  const double c0 = a1 + r * c1;
  out.alpha = -0.5 * c1;
  out.beta = std::sqrt(std::max(0.0, c0 - out.alpha * out.alpha));
  return out;
}

double cubic_relation(const CubicRoots& roots, double y) {
  switch (roots.kind) {
    case RootCase::three_distinct_real: {
      const auto& r = roots.real;
      double g = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        double dp = 1.0;
        for (std::size_t j = 0; j < 3; ++j) {
          if (j != i) dp *= r[i] - r[j];
        }
        g += std::log(std::abs(y - r[i])) / dp;
      }
      return g;
    }
    case RootCase::double_and_simple_real: {
      const double y1 = roots.simple;
      const double y2 = roots.repeated;
      const double d = y1 - y2;
      return std::log(std::abs((y - y1) / (y - y2))) / (d * d) + 1.0 / (d * (y - y2));
    }
    case RootCase::triple_real: {
      const double u = y - roots.real[0];
      return -0.5 / (u * u);
    }
    case RootCase::real_and_complex_pair: {
      const double y3 = roots.real[0];
      const double u = y - roots.alpha;
      const double beta = roots.beta;
      const double A = 1.0 / ((y3 - roots.alpha) * (y3 - roots.alpha) + beta * beta);
      return A * (std::log(std::abs(y - y3)) - 0.5 * std::log(u * u + beta * beta) +
                  (roots.alpha - y3) / beta * std::atan(u / beta));
    }
  }
  return 0.0;
}

namespace {

double monic_value(const CubicRoots& roots, double y) {
  switch (roots.kind) {
    case RootCase::three_distinct_real:
      return (y - roots.real[0]) * (y - roots.real[1]) * (y - roots.real[2]);
    case RootCase::double_and_simple_real:
      return (y - roots.simple) * (y - roots.repeated) * (y - roots.repeated);
    case RootCase::triple_real: {
      const double u = y - roots.real[0];
      return u * u * u;
    }
    case RootCase::real_and_complex_pair: {
      const double u = y - roots.alpha;
      return (u * u + roots.beta * roots.beta) * (y - roots.real[0]);
    }
  }
  return 0.0;
}

/// Limit of the relation as y -> +inf (upper = true) or -inf.
double relation_at_infinity(const CubicRoots& roots, bool upper) {
  if (roots.kind != RootCase::real_and_complex_pair) return 0.0;
  const double y3 = roots.real[0];
  const double A = 1.0 / ((y3 - roots.alpha) * (y3 - roots.alpha) + roots.beta * roots.beta);
  const double lim = A * (roots.alpha - y3) / roots.beta * (std::numbers::pi / 2.0);
  return upper ? lim : -lim;
}

}  // namespace

ConstantCoeffSolution solve_constant_coeffs(std::array<double, 4> A, double x0, double y0,
                                            std::span<const double> x_targets) {
  const double A3 = A[3];
  if (A3 == 0.0) {
    throw PreconditionError("A3 = 0: the equation is a Riccati equation; use reduce_to_riccati");
  }
  for (double a : A) {
    if (!std::isfinite(a)) throw InvalidInput("coefficients must be finite");
  }
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw InvalidInput("initial point must be finite");
  require_increasing(x_targets, "solve_constant_coeffs");

  ConstantCoeffSolution sol;
  sol.roots = classify_cubic(A[2] / A3, A[1] / A3, A[0] / A3);
  const CubicRoots& roots = sol.roots;

  // equilibrium?
  for (double r : roots.real) {
    if (std::abs(y0 - r) <= 1e-12 * std::max(1.0, std::abs(r))) {
      sol.equilibrium = r;
      sol.branch_lo = sol.branch_hi = r;
      std::vector<CurvePoint> pts;
      for (double x : x_targets) pts.push_back({x, r});
      sol.curve = SampledCurve(std::move(pts));
      return sol;
    }
  }

  double lo = -kInf, hi = kInf;
  for (double r : roots.real) {
    if (r < y0) lo = r;
    if (r > y0 && hi == kInf) hi = r;
  }
  sol.branch_lo = lo;
  sol.branch_hi = hi;

  auto G = [&](double y) { return cubic_relation(roots, y); };
  auto dG = [&](double y) { return 1.0 / monic_value(roots, y); };
  const double K = G(y0) - A3 * x0;
  sol.integration_constant = K;

  // A finite limit of G at an infinite end of the branch is a blow-up value.
  std::vector<double> limits;
  if (!std::isfinite(hi)) limits.push_back(relation_at_infinity(roots, true));
  if (!std::isfinite(lo)) limits.push_back(relation_at_infinity(roots, false));
  for (double lim : limits) {
    const double xc = (lim - K) / A3;
    if (xc > x0) sol.blow_up_forward = xc;
    else sol.blow_up_backward = xc;
  }

  std::vector<CurvePoint> pts;
  pts.reserve(x_targets.size());
  for (double x : x_targets) {
    if ((sol.blow_up_forward && x >= *sol.blow_up_forward) ||
        (sol.blow_up_backward && x <= *sol.blow_up_backward)) {
      const double xc = (sol.blow_up_forward && x >= *sol.blow_up_forward) ? *sol.blow_up_forward
                                                                             : *sol.blow_up_backward;
      throw BlowUpError(xc, "solution through (" + std::to_string(x0) + ", " + std::to_string(y0) +
                                ") blows up at x = " + std::to_string(xc));
    }
    const double T = A3 * x + K;
    double y;
    if (roots.kind == RootCase::triple_real) {
      // -1/(2 (y - y1)^2) = A3 x + c
      y = roots.real[0] + sign_of(y0 - roots.real[0]) / std::sqrt(-2.0 * T);
    } else {
      y = invert_monotone(G, dG, lo, hi, y0, T);
    }
    pts.push_back({x, y});
  }
  sol.curve = SampledCurve(std::move(pts));
  return sol;
}

// --- normal form --------------------------------------------------------------------

namespace {

void require_nonvanishing(const ScalarFunction& f, const AbelFirstKind& eq, const char* what) {
  const auto grid = eq.grid(128);
  int s0 = 0;
  for (double x : grid) {
    const double v = f(x);
    const int s = sign_of(v);
    if (std::abs(v) < 1e-12 || (s0 != 0 && s != s0)) {
      throw SingularityError(f.name(), x,
                             std::string(what) + ": coefficient '" + f.name() +
                                 "' vanishes on the working interval near x = " + std::to_string(x));
    }
    s0 = s;
  }
}

}  // namespace

NormalForm to_normal_form(const AbelFirstKind& eq, std::optional<double> omega_at_anchor) {
  require_nonvanishing(eq.f3, eq, "normal form");
  const double anchor = eq.domain.anchor;
  const double w0 = omega_at_anchor.value_or(1.0);
  const ScalarFunction n = eq.f2 / eq.f3;
  const ScalarFunction exponent = eq.f1 - (1.0 / 3.0) * (eq.f2 * n);
  const ScalarFunction omega = exp_antiderivative(exponent, anchor, w0).named("omega");
  const ScalarFunction xi = antiderivative(eq.f3 * omega * omega, anchor).named("xi");
  const ScalarFunction numerator = eq.f0 + (1.0 / 3.0) * n.derivative_function() -
                                   (1.0 / 3.0) * (eq.f1 * n) + (2.0 / 27.0) * (eq.f2 * n * n);
  const ScalarFunction invariant = (numerator / (eq.f3 * pow(omega, 3))).named("I");
  return {omega, xi, ((1.0 / 3.0) * n).named("shift"), invariant, anchor, w0};
}

NormalForm rescale(const NormalForm& nf, double lambda) {
  NormalForm out = nf;
  out.omega = (lambda * nf.omega).named("omega");
  out.xi = (lambda * lambda * nf.xi).named("xi");
  out.invariant = ((1.0 / (lambda * lambda * lambda)) * nf.invariant).named("I");
  out.omega_at_anchor = lambda * nf.omega_at_anchor;
  return out;
}

NormalForm unit_normalized(const NormalForm& nf) {
  const double i0 = nf.invariant(nf.anchor);
  if (i0 == 0.0) return nf;
  return rescale(nf, std::cbrt(-i0));
}

std::optional<double> null_invariant_blow_up(const AbelFirstKind& eq, double c, double lo,
                                             double hi) {
  const NormalForm nf = to_normal_form(eq);
  auto gap = [&](double x) { return c - 2.0 * nf.xi(x); };
  const double glo = gap(lo);
  const double ghi = gap(hi);
  if (sign_of(glo) == sign_of(ghi) && glo != 0.0) return std::nullopt;
  // d(gap)/dx = -2 f3 omega^2
  const auto value_slope = [&](double x) {
    const double w = nf.omega(x);
    return std::pair{gap(x), -2.0 * eq.f3(x) * w * w};
  };
  return numerics::solve_bracketed(value_slope, lo, hi);
}

SampledCurve solve_null_invariant(const AbelFirstKind& eq, double c,
                                  std::span<const double> x_targets, int sign) {
  require_increasing(x_targets, "solve_null_invariant");
  if (sign != 1 && sign != -1) throw InvalidInput("sign must be +1 or -1");
  const NormalForm nf = to_normal_form(eq);
  for (double x : x_targets) {
    const double inv = nf.invariant(x);
    if (std::abs(inv) >= 1e-8) {
      throw PreconditionError("invariant is not null at x = " + std::to_string(x) + " (I = " +
                              std::to_string(inv) + ")");
    }
  }
  std::vector<CurvePoint> pts;
  pts.reserve(x_targets.size());
  std::optional<double> last_ok;
  for (double x : x_targets) {
    const double d = c - 2.0 * nf.xi(x);
    if (!(d > 0.0)) {
      double xc = x;
      const double ref = last_ok.value_or(nf.anchor);
      if (c - 2.0 * nf.xi(ref) > 0.0) {
        if (auto root = null_invariant_blow_up(eq, c, std::min(ref, x), std::max(ref, x))) xc = *root;
      }
      throw BlowUpError(xc, "null-invariant solution blows up where xi = c/2 = " +
                                std::to_string(0.5 * c) + " (x = " + std::to_string(xc) + ")");
    }
    last_ok = x;
    pts.push_back({x, sign * nf.omega(x) / std::sqrt(d) - nf.shift(x)});
  }
  return SampledCurve(std::move(pts));
}

NullInvariantConstant null_invariant_constant(const AbelFirstKind& eq, double x0, double y0) {
  const NormalForm nf = to_normal_form(eq);
  const double eta0 = (y0 + nf.shift(x0)) / nf.omega(x0);
  if (eta0 == 0.0) {
    throw PreconditionError("eta = 0 is not reached by the null-invariant family");
  }
  return {2.0 * nf.xi(x0) + 1.0 / (eta0 * eta0), sign_of(eta0)};
}

// --- integrating factor -------------------------------------------------------------

std::optional<IntegratingFactorCertificate> integrating_factor_check(const AbelFirstKind& eq) {
  const auto grid = eq.grid(64);
  if (!vanishes_on(eq.f0, grid)) {
    throw PreconditionError("integrating-factor test needs f0 = 0");
  }
  const double anchor = eq.domain.anchor;
  const ScalarFunction E = exp_antiderivative(eq.f1, anchor);
  IntegratingFactorCertificate cert;
  cert.P = (eq.f3 * E * E).named("P");
  cert.Q = (eq.f2 * E).named("Q");

  if (vanishes_on(cert.P, grid, 0.0)) {
    throw PreconditionError("P vanishes identically; no integrating factor of this type");
  }
  const Interval w = eq.domain.working();
  const double mid = 0.5 * (w.lo + w.hi);
  const auto sing = eq.singularities();
  double probe = mid;
  for (int k = 1; k < 512; ++k) {
    const bool clear = std::none_of(sing.begin(), sing.end(),
                                    [&](double s) { return std::abs(probe - s) < 1e-6; });
    if (clear && std::abs(cert.P(probe)) > 1e-12) break;
    const double offset = std::fmod(k * std::numbers::phi, 1.0) - 0.5;
    probe = mid + offset * (w.hi - w.lo);
  }
  const double p_probe = cert.P(probe);
  if (std::abs(p_probe) <= 1e-12) {
    throw PreconditionError("could not find a probe point where P does not vanish");
  }
  cert.probe = probe;
  cert.k = cert.Q(probe) / p_probe;

  for (double x : grid) {
    const double q = cert.Q(x);
    const double kp = cert.k * cert.P(x);
    const double scale = std::max(std::abs(q), std::abs(kp));
    if (std::abs(q - kp) > 1e-8 * scale) return std::nullopt;
  }
  cert.intP = antiderivative(cert.P, anchor).named("intP");
  return cert;
}

double potential_psi(const IntegratingFactorCertificate& cert, double x, double nu) {
  const double k = cert.k;
  return (1.0 + k * nu) * std::exp(-k * (nu + k * cert.intP(x)));
}

ScalarFunction invariant_after_condition(const IntegratingFactorCertificate& cert,
                                         const AbelFirstKind& eq) {
  const double k = cert.k;
  const NormalForm nf = to_normal_form(eq);
  const auto grid = eq.grid(50);
  if (k == 0.0) {
    for (double x : grid) {
      if (std::abs(nf.invariant(x)) > 1e-12) {
        throw InternalConsistencyError("k = 0 but the normal-form invariant is not zero");
      }
    }
    return ScalarFunction::constant(0.0, "I");
  }
  const ScalarFunction I =
      ((2.0 * k * k * k / 27.0) * exp(antiderivative(eq.f2 * eq.f2 / eq.f3, eq.domain.anchor)))
          .named("I");
  for (double x : grid) {
    const double a = I(x);
    const double b = nf.invariant(x);
    if (std::abs(a - b) > 1e-6 * std::max(std::abs(a), std::abs(b))) {
      throw InternalConsistencyError("invariant after the integrability condition (" +
                                     std::to_string(a) + ") disagrees with the normal form (" +
                                     std::to_string(b) + ") at x = " + std::to_string(x));
    }
  }
  return I;
}

// --- canonical form -------------------------------------------------------------

CanonicalForm to_canonical_form(const AbelFirstKind& eq, std::optional<double> omega_at_anchor) {
  require_nonvanishing(eq.f2, eq, "canonical form");
  const double anchor = eq.domain.anchor;
  const ScalarFunction omega_t =
      exp_antiderivative(eq.f1, anchor, omega_at_anchor.value_or(1.0)).named("omega_t");
  const ScalarFunction zeta = antiderivative(eq.f2 * omega_t, anchor).named("zeta");
  const ScalarFunction appell = (eq.f3 / eq.f2 * omega_t).named("g");
  return {omega_t, zeta, appell, anchor};
}

SampledCurve solve_constant_appell(const AbelFirstKind& eq, double k, double x0, double y0,
                                   std::span<const double> x_targets) {
  if (k == 0.0 || !std::isfinite(k)) throw InvalidInput("k must be finite and nonzero");
  require_increasing(x_targets, "solve_constant_appell");
  const CanonicalForm cf = to_canonical_form(eq);
  for (double x : eq.grid(64)) {
    const double g = cf.appell(x);
    if (std::abs(g - 1.0 / k) > 1e-8 * std::abs(1.0 / k)) {
      throw PreconditionError("Appell invariant is not the constant 1/k (g = " + std::to_string(g) +
                              " at x = " + std::to_string(x) + ")");
    }
  }

  std::vector<CurvePoint> pts;
  pts.reserve(x_targets.size());
  const double w0 = cf.omega_t(x0);
  if (y0 == 0.0) {
    for (double x : x_targets) pts.push_back({x, 0.0});
    return SampledCurve(std::move(pts));
  }
  // u = 1/eta_t, H(u) = (1/k) ln|u + 1/k| - u = zeta + C
  const double u0 = w0 / y0;
  const double pole = -1.0 / k;
  if (std::abs(u0 - pole) <= 1e-12 * std::max(1.0, std::abs(pole))) {
    for (double x : x_targets) pts.push_back({x, -k * cf.omega_t(x)});
    return SampledCurve(std::move(pts));
  }
  auto H = [k](double u) { return std::log(std::abs(u + 1.0 / k)) / k - u; };
  auto dH = [k](double u) { return -k * u / (1.0 + k * u); };

  std::array<double, 2> cuts{std::min(pole, 0.0), std::max(pole, 0.0)};
  double lo = -kInf, hi = kInf;
  for (double c : cuts) {
    if (c < u0) lo = c;
    if (c > u0 && hi == kInf) hi = c;
  }
  const double C = H(u0) - cf.zeta(x0);
  // H(0) is finite: reaching u = 0 means eta_t -> infinity.
  const bool touches_zero = (lo == 0.0 || hi == 0.0);
  const double h_zero = H(0.0);

  for (double x : x_targets) {
    const double T = cf.zeta(x) + C;
    if (touches_zero) {
      // H is monotone on the branch with limit h_zero at the u = 0 end, so
      // every attainable value lies on the same side of h_zero as H(u0).
      const bool crossed = (H(u0) < h_zero) ? (T >= h_zero) : (T <= h_zero);
      if (crossed) {
        auto gap = [&](double xx) { return cf.zeta(xx) + C - h_zero; };
        double xc = x;
        if (sign_of(gap(x0)) != sign_of(gap(x))) xc = numerics::bisect(gap, x0, x, 1e-14);
        throw BlowUpError(xc, "canonical-form solution leaves its branch (eta_t -> infinity) at x = " +
                                  std::to_string(xc));
      }
    }
    const double u = invert_monotone(H, dH, lo, hi, u0, T);
    pts.push_back({x, cf.omega_t(x) / u});
  }
  return SampledCurve(std::move(pts));
}

}  // namespace abelkit
