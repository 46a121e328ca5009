#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "abelkit/abel.hpp"
#include "abelkit/hyperbolic3.hpp"
#include "abelkit/integrability.hpp"

namespace abelkit::vein {

struct VeinParams {
  double a = 1.0;
  double b = -2.0;
  /// Solution constant of the t-functions.
  double c = 1.0;
};

/// The determinants whose ratios give the coefficients:
/// f1 = 2 D1/D, f2 = -3 D2/D, f3 = D3/D.
struct Determinants {
  double D;
  double D1;
  double D2;
  double D3;
};

Determinants determinants(double a, double b, double x);

/// dy/dx = -2b/(bx+a^2) y + 3(ax+b^2)/(bx+a^2) y^2
///         + (x^3 - 3abx - a^3 - b^3)/(bx+a^2) y^3.
struct VeinEquation {
  VeinParams params;
  AbelFirstKind equation;
  /// x = -a^2/b, present when b != 0.
  std::optional<double> pole;
  /// x = a + b, the real root of the cubic numerator.
  double cubic_root = 0.0;

  /// pole (if any) and cubic_root, ascending.
  std::vector<double> singularities() const;
  /// f0..f3 from the rational form.
  std::array<double, 4> rational_coefficients(double x) const;
  /// f0..f3 from the determinant form.
  std::array<double, 4> determinant_coefficients(double x) const;
  /// Same equation on (lo, hi) with an anchor inside.
  VeinEquation on(double lo, double hi) const;
};

/// Throws InvalidInput for a = b = 0 (every coefficient degenerates).
VeinEquation vein_equation(const VeinParams& params, Interval working = {});

/// Maximal open sub-intervals of [lo, hi] free of the equation's singular
/// points, each shrunk by `margin` at a singular end.
std::vector<Interval> pole_free_intervals(const VeinParams& params, double lo, double hi,
                                          double margin = 0.0);

/// (a^2 + bx) / (x^3 - 3abx - a^3 - b^3).
double omega(const VeinParams& params, double x);

struct OmegaXi {
  double omega;
  double xi;
};

/// omega(x) and xi(x) - xi(anchor). For a != b xi comes from the closed-form
/// antiderivative; for a = b it is the quadrature of omega from the anchor.
OmegaXi omega_xi(const VeinParams& params, double x, double anchor);

/// Normal form with omega normalised as in the closed form, so that the
/// invariant is identically -1.
NormalForm vein_normal_form(const VeinEquation& eq);

/// xi(eta) - c for d eta/d xi = eta^3 - 1; eta = 1 is the equilibrium.
double normal_form_quadrature(double eta);

// --- the implicit map x = Phi(s) ----------------------------------------------------

struct PhiPoint {
  double s;
  double x;
  /// dPhi/ds.
  double dx_ds;
  hyperbolic3::TDerivatives t;
};

/// x = a t'/t + b t''/t for the family-th t-function. Throws
/// SingularityError when |t(s)| < 1e-12.
PhiPoint Phi(const VeinParams& params, double s, int family = 1);

enum class BranchEnd { range_limit, critical_point, pole };

const char* to_string(BranchEnd e) noexcept;

/// A maximal s-interval where Phi is strictly monotone and t != 0.
struct Branch {
  double s_lo;
  double s_hi;
  BranchEnd lo_kind;
  BranchEnd hi_kind;
  /// Phi at the ends; +-inf at a pole.
  double x_at_lo;
  double x_at_hi;
  bool increasing;

  double x_min() const { return std::min(x_at_lo, x_at_hi); }
  double x_max() const { return std::max(x_at_lo, x_at_hi); }
};

struct BranchTable {
  VeinParams params;
  int family = 1;
  double s_min = 0.0;
  double s_max = 0.0;
  std::vector<Branch> branches;

  /// Indices of the branches whose x-image contains x.
  std::vector<std::size_t> admissible(double x) const;
};

/// Scans t and the numerator of dPhi/ds for sign changes on a grid of the
/// given step, refines each by bisection to 1e-12 and splits [s_min, s_max]
/// there.
BranchTable branch_table(const VeinParams& params, double s_min, double s_max, int family = 1,
                         double step = 1e-3);

/// s on the given branch with Phi(s) = x: bisection seeded by the branch
/// interval, then safeguarded Newton. Throws OutOfRangeError (listing the
/// admissible branches) when x is outside the branch image.
double Phi_inverse(const BranchTable& table, double x, std::size_t branch);

/// An x-window of at most `max_length` inside the image of the branch, kept
/// clear of the image ends (where y blows up) and of the equation's singular
/// points by `margin`. Infinite image ends are clipped to |x - (a+b)| <= 8.
std::optional<Interval> solve_window(const BranchTable& table, std::size_t branch,
                                     double max_length = 1.0, double margin = 0.1);

/// y(x) from b/y = (ax + b^2) - (bx + a^2) t'/t at s = Phi^{-1}(x), with t
/// the table's t-function family (y = 1/(dPhi/ds) when b = 0).
SampledCurve solve(const BranchTable& table, std::size_t branch, std::span<const double> x_targets);

/// y = b / ((x - (a+b)) (a - b)): the candidate read off by matching the
/// arctan arguments of the two xi formulas. It does not solve the equation.
SampledCurve rejected_candidate(const VeinParams& params, std::span<const double> x_targets);

}  // namespace abelkit::vein
