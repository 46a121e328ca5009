#include "abelkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "abelkit/errors.hpp"

namespace abelkit::numerics {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

// Integrands built from other antiderivatives carry evaluation noise of
// roughly this relative size; finer panels cannot resolve below it.
constexpr double kRelativeFloor = 1e-12;

void refine(const std::function<double(double)>& f, double a, double b, double tol, int depth,
            QuadratureResult& acc) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = GK15::integrate(f, a, b, 0, 0.0, &err, &l1);
  // the single-rule estimate comes back on the reference interval [-1, 1]
  err *= 0.5 * (b - a);
  if (!std::isfinite(v)) {
    throw QuadratureError("integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  if (err <= tol || err <= kRelativeFloor * l1) {
    acc.value += v;
    acc.error += err;
    ++acc.panels;
    return;
  }
  if (depth == 0) {
    throw QuadratureError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) +
                          ", " + std::to_string(b) + "] (estimate " + std::to_string(err) + ")");
  }
  const double mid = 0.5 * (a + b);
  refine(f, a, mid, 0.5 * tol, depth - 1, acc);
  refine(f, mid, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_depth) {
  QuadratureResult acc;
  if (a == b) return acc;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw QuadratureError("integration limits must be finite");
  }
  if (b < a) {
    refine(f, b, a, abs_tol, max_depth, acc);
    acc.value = -acc.value;
    return acc;
  }
  refine(f, a, b, abs_tol, max_depth, acc);
  return acc;
}

double solve_bracketed(const ValueAndSlope& f, double lo, double hi, std::optional<double> guess,
                       const RootOptions& opt) {
  if (lo > hi) std::swap(lo, hi);
  auto [flo, dlo] = f(lo);
  if (flo == 0.0) return lo;
  auto [fhi, dhi] = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw InvalidInput("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]");
  }
  const bool rising = fhi > 0;

  double x = guess && *guess > lo && *guess < hi ? *guess : 0.5 * (lo + hi);
  auto [fx, dx] = f(x);
  int newton = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (fx == 0.0) return x;
    if ((fx > 0) == rising) hi = x; else lo = x;

    double next = 0.5 * (lo + hi);
    bool use_newton = false;
    if (newton < opt.max_newton && dx != 0.0 && std::isfinite(dx)) {
      const double cand = x - fx / dx;
      if (cand > lo && cand < hi) {
        next = cand;
        use_newton = true;
      }
    }
    const double step = next - x;
    auto [fn, dn] = f(next);
    if (use_newton) {
      ++newton;
      // Newton must at least halve the residual, otherwise bisect instead.
      if (std::abs(fn) > 0.5 * std::abs(fx) && std::abs(step) > opt.rel_step * std::max(1.0, std::abs(x))) {
        next = 0.5 * (lo + hi);
        std::tie(fn, dn) = f(next);
      }
    }
    const double moved = std::abs(next - x);
    x = next;
    fx = fn;
    dx = dn;
    const double scale = opt.rel_step * std::max(1.0, std::abs(x));
    if (moved < scale || (hi - lo) < scale) return x;
  }
  return x;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw InvalidInput("bisection: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int i = 0; i < max_iterations && std::abs(hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> derivative_weights(double at, std::span<const double> nodes) {
  // Fornberg (1988), specialised to derivative orders 0 and 1.
  const std::size_t n = nodes.size();
  std::vector<double> w0(n, 0.0), w1(n, 0.0);
  double c1 = 1.0;
  double c4 = nodes[0] - at;
  w0[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - at;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        w1[i] = c1 * (w0[i - 1] - c5 * w1[i - 1]) / c2;
        w0[i] = -c1 * c5 * w0[i - 1] / c2;
      }
      w1[j] = (c4 * w1[j] - w0[j]) / c3;
      w0[j] = c4 * w0[j] / c3;
    }
    c1 = c2;
  }
  return w1;
}

std::vector<double> sampled_derivative(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 5 || ys.size() != n) {
    throw InvalidInput("sampled derivative needs at least 5 points with matching ordinates");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // off-centre stencils near the ends lose accuracy; widen them to 7 nodes
    const bool edge = i < 2 || i + 2 >= n;
    const std::size_t m = edge && n >= 7 ? 7 : 5;
    const std::size_t start = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - 2, 0,
                                                         static_cast<std::ptrdiff_t>(n - m));
    const auto w = derivative_weights(xs[i], xs.subspan(start, m));
    double d = 0.0;
    for (std::size_t k = 0; k < m; ++k) d += w[k] * ys[start + k];
    out[i] = d;
  }
  return out;
}

}  // namespace abelkit::numerics
