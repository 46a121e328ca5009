#include "abelkit/hyperbolic3.hpp"

#include <cmath>

#include "abelkit/errors.hpp"

namespace abelkit::hyperbolic3 {

namespace {
constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kSqrt3 = 1.732050807568877293527446341505872367L;
}  // namespace

long double Triad::cubic_form() const {
  const long double d12 = phi1 - phi2;
  const long double d23 = phi2 - phi3;
  const long double d31 = phi3 - phi1;
  return sum() * (d12 * d12 + d23 * d23 + d31 * d31) / 2;
}

Triad phi(double x) {
  if (!std::isfinite(x)) throw InvalidInput("phi: argument must be finite");
  const long double X = x;
  const long double grow = std::exp(X);
  const long double decay = 2 * std::exp(-X / 2);
  const long double theta = X * kSqrt3 / 2;
  return {(grow + decay * std::cos(theta)) / 3,
          (grow - decay * std::cos(theta + kPi / 3)) / 3,
          (grow - decay * std::cos(theta - kPi / 3)) / 3};
}

Triad rotate(const Triad& t, unsigned order) {
  switch (order % 3) {
    case 1: return {t.phi3, t.phi1, t.phi2};
    case 2: return {t.phi2, t.phi3, t.phi1};
    default: return t;
  }
}

Triad phi_derivative(double x, unsigned order) { return rotate(phi(x), order); }

long double wronskian(double x) {
  const Triad r0 = phi(x);
  const Triad r1 = rotate(r0, 1);
  const Triad r2 = rotate(r0, 2);
  return r0.phi1 * (r1.phi2 * r2.phi3 - r1.phi3 * r2.phi2) -
         r0.phi2 * (r1.phi1 * r2.phi3 - r1.phi3 * r2.phi1) +
         r0.phi3 * (r1.phi1 * r2.phi2 - r1.phi2 * r2.phi1);
}

TFunctions t_functions(double s, double c) {
  const Triad p = phi(s);
  const long double C = c;
  return {C * p.phi1 + p.phi2, C * p.phi2 + p.phi3, C * p.phi3 + p.phi1};
}

TDerivatives t_derivatives(double s, double c, int family) {
  const TFunctions t = t_functions(s, c);
  // t1' = t3, t2' = t1, t3' = t2 (inherited from the triad rotation)
  switch (family) {
    case 1: return {t.t1, t.t3, t.t2};
    case 2: return {t.t2, t.t1, t.t3};
    case 3: return {t.t3, t.t2, t.t1};
    default: throw InvalidInput("t-function family must be 1, 2 or 3");
  }
}

TDerivatives differentiate(const TDerivatives& d) { return {d.dt, d.d2t, d.t}; }

}  // namespace abelkit::hyperbolic3
