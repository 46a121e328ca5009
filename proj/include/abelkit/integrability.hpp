#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abelkit/abel.hpp"

namespace abelkit {

// --- constant coefficients ----------------------------------------------------

enum class RootCase {
  three_distinct_real,     // (i)
  double_and_simple_real,  // (ii)
  triple_real,             // (iii)
  real_and_complex_pair,   // (iv)
};

const char* to_string(RootCase c) noexcept;

/// Roots of the monic cubic y^3 + a2 y^2 + a1 y + a0.
struct CubicRoots {
  RootCase kind;
  /// Distinct real roots, ascending.
  std::vector<double> real;
  /// Case (ii): the simple and the repeated root.
  double simple = 0.0;
  double repeated = 0.0;
  /// Case (iv): complex pair alpha +- i beta (beta > 0).
  double alpha = 0.0;
  double beta = 0.0;
  /// Discriminant of the cubic after scaling the roots to unit size.
  double scaled_discriminant = 0.0;
};

/// Discriminant tie tolerance 1e-10 (scaled); a triple root is declared
/// when the depressed linear coefficient is also within 1e-10.
CubicRoots classify_cubic(double a2, double a1, double a0);

/// Integral of dy / P(y) for the monic cubic P with the given roots,
/// with the additive constant chosen so that the value at y -> +inf is the
/// natural limit (0 for real-root cases).
double cubic_relation(const CubicRoots& roots, double y);

struct ConstantCoeffSolution {
  SampledCurve curve;
  CubicRoots roots;
  /// K in G(y) = A3 x + K.
  double integration_constant = 0.0;
  /// Set when y0 is a root of F: the solution is constant.
  std::optional<double> equilibrium;
  /// Interval of y values (between real roots, possibly unbounded) that the
  /// solution through (x0, y0) lives in.
  double branch_lo = 0.0;
  double branch_hi = 0.0;
  /// Finite-time blow-up abscissae of this branch, if any.
  std::optional<double> blow_up_forward;
  std::optional<double> blow_up_backward;
};

/// Solution of dy/dx = A0 + A1 y + A2 y^2 + A3 y^3 through (x0, y0) at each
/// target (strictly increasing). Throws PreconditionError for A3 = 0 and
/// BlowUpError when a target is past the branch's blow-up abscissa.
ConstantCoeffSolution solve_constant_coeffs(std::array<double, 4> A, double x0, double y0,
                                            std::span<const double> x_targets);

// --- normal form ----------------------------------------------------------------

/// y = omega eta - f2/(3 f3), xi = integral f3 omega^2, d eta/d xi = eta^3 + I.
struct NormalForm {
  ScalarFunction omega;
  ScalarFunction xi;
  ScalarFunction shift;
  ScalarFunction invariant;
  double anchor = 0.0;
  double omega_at_anchor = 1.0;
};

/// `omega_at_anchor` fixes the free constant factor of omega (default 1).
/// Throws SingularityError if f3 vanishes on the working interval.
NormalForm to_normal_form(const AbelFirstKind& eq, std::optional<double> omega_at_anchor = {});

/// The same normal form with omega scaled by lambda (xi by lambda^2, I by
/// lambda^-3).
NormalForm rescale(const NormalForm& nf, double lambda);

/// Real scale chosen so that I(anchor) = -1 (omega may change sign);
/// unchanged when I(anchor) = 0.
NormalForm unit_normalized(const NormalForm& nf);

/// y = sign * omega / sqrt(c - 2 xi) - f2/(3 f3) for equations with I = 0.
SampledCurve solve_null_invariant(const AbelFirstKind& eq, double c,
                                  std::span<const double> x_targets, int sign = +1);

struct NullInvariantConstant {
  double c;
  int sign;
};

/// (c, sign) of the null-invariant solution through (x0, y0).
NullInvariantConstant null_invariant_constant(const AbelFirstKind& eq, double x0, double y0);

/// Root of c - 2 xi(x) in [lo, hi], if the sign changes there.
std::optional<double> null_invariant_blow_up(const AbelFirstKind& eq, double c, double lo,
                                             double hi);

// --- integrating factor -------------------------------------------------------------

struct IntegratingFactorCertificate {
  double k = 0.0;
  ScalarFunction P;
  ScalarFunction Q;
  ScalarFunction intP;
  double probe = 0.0;
};

/// For f0 = 0: P = f3 E^2, Q = f2 E with E = exp(integral f1). Returns the
/// certificate when Q = k P holds on the sample grid (relative 1e-8).
std::optional<IntegratingFactorCertificate> integrating_factor_check(const AbelFirstKind& eq);

/// (1 + k nu) exp(-k (nu + k integral P)); constant along solutions nu of
/// nu dnu + (P + Q nu) dx = 0.
double potential_psi(const IntegratingFactorCertificate& cert, double x, double nu);

/// I(x) = (2 k^3 / 27) exp(integral f2^2/f3), cross-checked against the
/// normal-form invariant (relative 1e-6). Throws InternalConsistencyError
/// on disagreement.
ScalarFunction invariant_after_condition(const IntegratingFactorCertificate& cert,
                                         const AbelFirstKind& eq);

// --- canonical form -------------------------------------------------------------

/// y = omega_t eta_t(zeta), zeta = integral f2 omega_t,
/// d eta_t/d zeta = eta_t^2 + g eta_t^3 with g the Appell invariant.
struct CanonicalForm {
  ScalarFunction omega_t;
  ScalarFunction zeta;
  ScalarFunction appell;
  double anchor = 0.0;
};

CanonicalForm to_canonical_form(const AbelFirstKind& eq,
                                std::optional<double> omega_at_anchor = {});

/// Solution through (x0, y0) when the Appell invariant is the constant 1/k,
/// from (1/k) ln|1/eta + 1/k| - 1/eta = zeta + const.
SampledCurve solve_constant_appell(const AbelFirstKind& eq, double k, double x0, double y0,
                                   std::span<const double> x_targets);

}  // namespace abelkit
