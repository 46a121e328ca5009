#include "abelkit/vein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "abelkit/errors.hpp"
#include "abelkit/numerics.hpp"
#include "abelkit/rational.hpp"

namespace abelkit::vein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cubic(double a, double b, double x) { return x * x * x - 3 * a * b * x - a * a * a - b * b * b; }

double det2(double m00, double m01, double m10, double m11) { return m00 * m11 - m01 * m10; }

double det3(const double m[3][3]) {
  return m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2]) -
         m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2]) +
         m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
}

std::vector<double> singular_points(const VeinParams& p) {
  std::vector<double> out{p.a + p.b};
  if (p.b != 0.0) out.push_back(-p.a * p.a / p.b);
  // the quadratic factor has real roots only for a = b (double root at -a)
  if (p.a == p.b) out.push_back(-p.a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double xi_closed(const VeinParams& p, double x) {
  const double a = p.a;
  const double b = p.b;
  const double r = x - (a + b);
  const double q = x * x + (a + b) * x + a * a - a * b + b * b;
  const double k = std::numbers::sqrt3 / 3.0;
  return std::log(r * r / q) / 6.0 - k * std::atan(k * (2 * x + a + b) / (a - b));
}

}  // namespace

Determinants determinants(double a, double b, double x) {
  const double m3[3][3] = {{x, -a, -b}, {-b, x, -a}, {-a, -b, x}};
  return {det2(-a, -b, x, -a), -b, det2(x, -b, -b, -a), det3(m3)};
}

std::vector<double> VeinEquation::singularities() const {
  std::vector<double> out{cubic_root};
  if (pole) out.push_back(*pole);
  std::sort(out.begin(), out.end());
  return out;
}

std::array<double, 4> VeinEquation::rational_coefficients(double x) const {
  const double a = params.a;
  const double b = params.b;
  const double d = b * x + a * a;
  return {0.0, -2 * b / d, 3 * (a * x + b * b) / d, cubic(a, b, x) / d};
}

std::array<double, 4> VeinEquation::determinant_coefficients(double x) const {
  const Determinants d = determinants(params.a, params.b, x);
  return {0.0, 2 * d.D1 / d.D, -3 * d.D2 / d.D, d.D3 / d.D};
}

VeinEquation VeinEquation::on(double lo, double hi) const {
  VeinEquation out = *this;
  const auto sing = singularities();
  out.equation.domain = Domain::make(lo, hi, sing);
  return out;
}

VeinEquation vein_equation(const VeinParams& params, Interval working) {
  const double a = params.a;
  const double b = params.b;
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(params.c)) {
    throw InvalidInput("vein parameters must be finite");
  }
  if (a == 0.0 && b == 0.0) throw InvalidInput("vein equation needs (a, b) != (0, 0)");

  VeinEquation eq;
  eq.params = params;
  eq.cubic_root = a + b;
  std::vector<double> poles;
  if (b != 0.0) {
    eq.pole = -a * a / b;
    poles.push_back(*eq.pole);
  }
  const Polynomial D{{a * a, b}};
  const Rational f1(Polynomial{{-2 * b}}, D);
  const Rational f2(Polynomial{{3 * b * b, 3 * a}}, D);
  const Rational f3(Polynomial{{-a * a * a - b * b * b, -3 * a * b, 0.0, 1.0}}, D);
  eq.equation = AbelFirstKind::make(ScalarFunction(), f1.function("f1", poles),
                                    f2.function("f2", poles), f3.function("f3", poles), working);
  const auto sing = eq.singularities();
  eq.equation.domain = Domain::make(working.lo, working.hi, sing);

  // the determinant form must reproduce the rational coefficients
  for (double x : {-2.5, -0.75, 0.3, 1.7, 3.1}) {
    if (eq.pole && std::abs(x - *eq.pole) < 1e-3) continue;
    const auto r = eq.rational_coefficients(x);
    const auto d = eq.determinant_coefficients(x);
    for (int i = 0; i < 4; ++i) {
      if (std::abs(r[i] - d[i]) > 1e-9 * std::max(1.0, std::abs(r[i]))) {
        throw InternalConsistencyError("determinant form disagrees with the rational form at x = " +
                                       fmt(x));
      }
    }
  }
  return eq;
}

std::vector<Interval> pole_free_intervals(const VeinParams& params, double lo, double hi,
                                          double margin) {
  if (!(lo < hi)) throw InvalidInput("pole_free_intervals: empty window");
  std::vector<double> cuts;
  for (double s : singular_points(params)) {
    if (s > lo && s < hi) cuts.push_back(s);
  }
  std::vector<Interval> out;
  double left = lo;
  bool left_singular = false;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const bool right_singular = i < cuts.size();
    const double right = right_singular ? cuts[i] : hi;
    const double l = left + (left_singular ? margin : 0.0);
    const double r = right - (right_singular ? margin : 0.0);
    if (l < r) out.push_back({l, r});
    left = right;
    left_singular = true;
  }
  return out;
}

double omega(const VeinParams& params, double x) {
  std::vector<double> poles{params.a + params.b};
  if (params.a == params.b) poles.push_back(-params.a);
  for (double s : poles) {
    if (std::abs(x - s) <= kSingularityRadius) {
      throw SingularityError("omega", s, "omega has a pole at x = " + fmt(s));
    }
  }
  return (params.a * params.a + params.b * x) / cubic(params.a, params.b, x);
}

OmegaXi omega_xi(const VeinParams& params, double x, double anchor) {
  const double w = omega(params, x);
  (void)omega(params, anchor);
  if (params.a != params.b) return {w, xi_closed(params, x) - xi_closed(params, anchor)};

  // a = b: the arctan term of the closed form is undefined, integrate omega
  const double lo = std::min(x, anchor);
  const double hi = std::max(x, anchor);
  for (double s : {params.a + params.b, -params.a}) {
    if (s >= lo - kSingularityRadius && s <= hi + kSingularityRadius) {
      throw SingularityError("omega", s,
                             "xi quadrature path crosses the pole of omega at x = " + fmt(s));
    }
  }
  const auto q = numerics::integrate([&](double t) { return omega(params, t); }, anchor, x);
  return {w, q.value};
}

NormalForm vein_normal_form(const VeinEquation& eq) {
  return to_normal_form(eq.equation, omega(eq.params, eq.equation.domain.anchor));
}

double normal_form_quadrature(double eta) {
  if (!std::isfinite(eta)) throw InvalidInput("eta must be finite");
  if (eta == 1.0) throw PreconditionError("eta = 1 is the equilibrium solution of eta' = eta^3 - 1");
  const double k = std::numbers::sqrt3 / 3.0;
  const double d = eta - 1.0;
  return std::log(d * d / (1.0 + eta + eta * eta)) / 6.0 - k * std::atan(k * (1.0 + 2.0 * eta));
}

PhiPoint Phi(const VeinParams& params, double s, int family) {
  const hyperbolic3::TDerivatives t = hyperbolic3::t_derivatives(s, params.c, family);
  if (std::abs(t.t) < 1e-12L) {
    throw SingularityError("t", s, "Phi has a pole at s = " + fmt(s) + " (t = 0)");
  }
  const long double a = params.a;
  const long double b = params.b;
  const long double r1 = t.dt / t.t;
  const long double r2 = t.d2t / t.t;
  const long double x = a * r1 + b * r2;
  const long double dx = a * (r2 - r1 * r1) + b * (1.0L - r1 * r2);
  return {s, static_cast<double>(x), static_cast<double>(dx), t};
}

const char* to_string(BranchEnd e) noexcept {
  switch (e) {
    case BranchEnd::range_limit: return "range_limit";
    case BranchEnd::critical_point: return "critical_point";
    case BranchEnd::pole: return "pole";
  }
  return "unknown";
}

std::vector<std::size_t> BranchTable::admissible(double x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (x > branches[i].x_min() && x < branches[i].x_max()) out.push_back(i);
  }
  return out;
}

namespace {

/// Numerator of dPhi/ds (the denominator t^2 is positive).
long double slope_numerator(const VeinParams& p, const hyperbolic3::TDerivatives& t) {
  return p.a * (t.d2t * t.t - t.dt * t.dt) + p.b * (t.t * t.t - t.dt * t.d2t);
}

int sign_of(long double v) { return (v > 0) - (v < 0); }

struct Breakpoint {
  double s;
  BranchEnd kind;
};

}  // namespace

BranchTable branch_table(const VeinParams& params, double s_min, double s_max, int family,
                         double step) {
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !(s_min < s_max)) {
    throw InvalidInput("branch_table: empty or non-finite s range");
  }
  if (!(step > 0.0)) throw InvalidInput("branch_table: step must be positive");
  if (params.a == 0.0 && params.b == 0.0) throw InvalidInput("Phi needs (a, b) != (0, 0)");
  (void)hyperbolic3::t_derivatives(0.0, params.c, family);

  auto t_at = [&](double s) { return hyperbolic3::t_derivatives(s, params.c, family); };
  auto t_value = [&](double s) { return static_cast<double>(t_at(s).t); };
  auto w_value = [&](double s) { return static_cast<double>(slope_numerator(params, t_at(s))); };

  const auto n = static_cast<std::size_t>(std::ceil((s_max - s_min) / step));
  std::vector<Breakpoint> cuts;
  double s_prev = s_min;
  auto t_prev = t_at(s_prev);
  for (std::size_t i = 1; i <= n; ++i) {
    const double s = (i == n) ? s_max : s_min + static_cast<double>(i) * step;
    const auto t_cur = t_at(s);
    if (t_cur.t == 0.0L && i < n) {
      cuts.push_back({s, BranchEnd::pole});
    } else if (sign_of(t_prev.t) * sign_of(t_cur.t) < 0) {
      cuts.push_back({numerics::bisect(t_value, s_prev, s, 1e-12), BranchEnd::pole});
    }
    const long double w0 = slope_numerator(params, t_prev);
    const long double w1 = slope_numerator(params, t_cur);
    if (sign_of(w0) * sign_of(w1) < 0) {
      cuts.push_back({numerics::bisect(w_value, s_prev, s, 1e-12), BranchEnd::critical_point});
    } else if (w1 == 0.0L && i < n) {
      cuts.push_back({s, BranchEnd::critical_point});
    }
    s_prev = s;
    t_prev = t_cur;
  }
  std::sort(cuts.begin(), cuts.end(), [](const Breakpoint& l, const Breakpoint& r) { return l.s < r.s; });
  std::vector<Breakpoint> merged;
  for (const auto& c : cuts) {
    if (!merged.empty() && c.s - merged.back().s <= 1e-12) {
      if (c.kind == BranchEnd::pole) merged.back().kind = BranchEnd::pole;
      continue;
    }
    merged.push_back(c);
  }

  std::vector<Breakpoint> ends;
  ends.push_back({s_min, BranchEnd::range_limit});
  for (const auto& c : merged) {
    if (c.s > s_min && c.s < s_max) ends.push_back(c);
  }
  ends.push_back({s_max, BranchEnd::range_limit});

  BranchTable table;
  table.params = params;
  table.family = family;
  table.s_min = s_min;
  table.s_max = s_max;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    Branch br{ends[i].s, ends[i + 1].s, ends[i].kind, ends[i + 1].kind, 0.0, 0.0, true};
    if (!(br.s_hi - br.s_lo > 2e-12)) continue;
    const double mid = 0.5 * (br.s_lo + br.s_hi);
    br.increasing = w_value(mid) > 0.0;
    auto end_value = [&](double s, BranchEnd kind, bool upper) {
      if (kind == BranchEnd::pole) return (br.increasing == upper) ? kInf : -kInf;
      return Phi(params, s, family).x;
    };
    br.x_at_lo = end_value(br.s_lo, br.lo_kind, false);
    br.x_at_hi = end_value(br.s_hi, br.hi_kind, true);
    table.branches.push_back(br);
  }
  return table;
}

double Phi_inverse(const BranchTable& table, double x, std::size_t branch) {
  if (branch >= table.branches.size()) {
    throw OutOfRangeError(table.admissible(x), "branch index " + std::to_string(branch) +
                                                   " is out of range (table has " +
                                                   std::to_string(table.branches.size()) + ")");
  }
  const Branch& br = table.branches[branch];
  auto reject = [&]() {
    const auto adm = table.admissible(x);
    std::string list;
    for (std::size_t i : adm) list += (list.empty() ? "" : ", ") + std::to_string(i);
    return OutOfRangeError(adm, "x = " + fmt(x) + " is outside the image of branch " +
                                    std::to_string(branch) + "; admissible branches: [" + list +
                                    "]");
  };
  if (!std::isfinite(x) || !(x >= br.x_min() && x <= br.x_max())) throw reject();

  const double lo = br.s_lo + (br.lo_kind == BranchEnd::pole ? kSingularityRadius : 0.0);
  const double hi = br.s_hi - (br.hi_kind == BranchEnd::pole ? kSingularityRadius : 0.0);
  auto f = [&](double s) {
    const PhiPoint p = Phi(table.params, s, table.family);
    return std::pair{p.x - x, p.dx_ds};
  };
  const double flo = f(lo).first;
  const double fhi = f(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw reject();
  return numerics::solve_bracketed(f, lo, hi);
}

std::optional<Interval> solve_window(const BranchTable& table, std::size_t branch,
                                     double max_length, double margin) {
  if (branch >= table.branches.size()) {
    throw OutOfRangeError({}, "branch index " + std::to_string(branch) + " is out of range");
  }
  if (!(max_length > 0.0) || !(margin >= 0.0)) throw InvalidInput("solve_window: bad length or margin");
  const Branch& br = table.branches[branch];
  const double centre = table.params.a + table.params.b;
  double lo = std::isfinite(br.x_min()) ? br.x_min() + margin : centre - 8.0;
  double hi = std::isfinite(br.x_max()) ? br.x_max() - margin : centre + 8.0;
  if (!(lo < hi)) return std::nullopt;
  std::optional<Interval> best;
  for (const Interval& iv : pole_free_intervals(table.params, lo, hi, margin)) {
    if (!best || iv.hi - iv.lo > best->hi - best->lo) best = iv;
  }
  if (!best) return std::nullopt;
  if (best->hi - best->lo > max_length) {
    const double mid = 0.5 * (best->lo + best->hi);
    best = Interval{mid - 0.5 * max_length, mid + 0.5 * max_length};
  }
  return best;
}

SampledCurve solve(const BranchTable& table, std::size_t branch,
                   std::span<const double> x_targets) {
  require_increasing(x_targets, "vein solve");
  const long double a = table.params.a;
  const long double b = table.params.b;
  std::vector<CurvePoint> pts;
  pts.reserve(x_targets.size());
  for (double x : x_targets) {
    const double s = Phi_inverse(table, x, branch);
    const PhiPoint p = Phi(table.params, s, table.family);
    long double y;
    if (b != 0.0L) {
      const long double X = x;
      const long double denom = (a * X + b * b) - (b * X + a * a) * (p.t.dt / p.t.t);
      if (denom == 0.0L) throw BlowUpError(x, "solution pole at x = " + fmt(x));
      y = b / denom;
    } else {
      if (p.dx_ds == 0.0) throw BlowUpError(x, "solution pole at x = " + fmt(x));
      y = 1.0L / p.dx_ds;
    }
    if (!std::isfinite(static_cast<double>(y))) {
      throw BlowUpError(x, "solution pole at x = " + fmt(x));
    }
    pts.push_back({x, static_cast<double>(y)});
  }
  return SampledCurve(std::move(pts));
}

SampledCurve rejected_candidate(const VeinParams& params, std::span<const double> x_targets) {
  require_increasing(x_targets, "rejected candidate");
  if (params.a == params.b) throw InvalidInput("the candidate divides by a - b; needs a != b");
  std::vector<CurvePoint> pts;
  pts.reserve(x_targets.size());
  for (double x : x_targets) {
    const double r = x - (params.a + params.b);
    if (std::abs(r) <= kSingularityRadius) {
      throw SingularityError("candidate", params.a + params.b,
                             "candidate has a pole at x = a + b");
    }
    pts.push_back({x, params.b / (r * (params.a - params.b))});
  }
  return SampledCurve(std::move(pts));
}

}  // namespace abelkit::vein
