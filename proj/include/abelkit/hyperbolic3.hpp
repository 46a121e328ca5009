#pragma once

namespace abelkit::hyperbolic3 {

/// The third-order hyperbolic functions phi1, phi2, phi3 at one argument.
///
/// Values are carried in extended precision: for negative arguments the
/// closed forms subtract terms of size e^{-x/2} to leave results of size
/// e^{x}, and double storage alone would cap the identity checks near 1e-11.
struct Triad {
  long double phi1 = 0;
  long double phi2 = 0;
  long double phi3 = 0;

  /// phi1 + phi2 + phi3 (equals e^x).
  long double sum() const { return phi1 + phi2 + phi3; }
  /// phi1^3 + phi2^3 + phi3^3 - 3 phi1 phi2 phi3 (equals 1), evaluated as
  /// sum * ((phi1-phi2)^2 + (phi2-phi3)^2 + (phi3-phi1)^2) / 2.
  long double cubic_form() const;
};

/// Throws InvalidInput for non-finite x.
Triad phi(double x);

/// Cyclic index rotation: d/dx (phi1, phi2, phi3) = (phi3, phi1, phi2).
Triad rotate(const Triad& t, unsigned order);

/// order-th derivative, by rotation (order mod 3).
Triad phi_derivative(double x, unsigned order);

/// det [phi; phi'; phi''] by cofactor expansion.
long double wronskian(double x);

/// t1 = c phi1 + phi2, t2 = c phi2 + phi3, t3 = c phi3 + phi1.
struct TFunctions {
  long double t1 = 0;
  long double t2 = 0;
  long double t3 = 0;
};

TFunctions t_functions(double s, double c);

/// (t, t', t'') for the family-th t-function; d/ds rotates it to the next
/// one cyclically, so t''' = t.
struct TDerivatives {
  long double t = 0;
  long double dt = 0;
  long double d2t = 0;
};

/// family in {1, 2, 3}.
TDerivatives t_derivatives(double s, double c, int family = 1);

/// Apply d/ds once: (t, t', t'') -> (t', t'', t).
TDerivatives differentiate(const TDerivatives& d);

}  // namespace abelkit::hyperbolic3
