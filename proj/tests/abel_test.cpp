#include <doctest.h>

#include <cmath>

#include "abelkit/abel.hpp"
#include "abelkit/errors.hpp"
#include "abelkit/integrability.hpp"
#include "abelkit/vein.hpp"
#include "support.hpp"

using namespace abelkit;
using SF = ScalarFunction;

namespace {

SF c(double v) { return SF::constant(v); }
const SF X = SF::identity();

AbelSecondKind second(SF p, SF q1, SF q2, SF r, SF s) {
  return {std::move(p), std::move(q1), std::move(q2), std::move(r), std::move(s), Interval{-2, 2}};
}

}  // namespace

TEST_CASE("second kind to first kind") {
  SUBCASE("s = 0 keeps the coefficients") {
    const auto f = second_to_first(second(exp(X), X, c(2.0), sqrt(c(3.0) + X), c(0.0)));
    for (double x : {-1.0, 0.0, 0.5}) {
      CHECK(f.f0(x) == doctest::Approx(std::sqrt(3 + x)));
      CHECK(f.f1(x) == doctest::Approx(2.0));
      CHECK(f.f2(x) == doctest::Approx(x));
      CHECK(f.f3(x) == doctest::Approx(std::exp(x)));
    }
  }
  SUBCASE("all zero") {
    const auto f = second_to_first(second(c(0), c(0), c(0), c(0), c(0)));
    for (double x : {-1.0, 0.3}) {
      CHECK(f.f0(x) == 0.0);
      CHECK(f.f1(x) == 0.0);
      CHECK(f.f2(x) == 0.0);
      CHECK(f.f3(x) == 0.0);
    }
  }
  SUBCASE("constants with s = 1") {
    const auto f = second_to_first(second(c(1), c(2), c(3), c(4), c(1)));
    CHECK(f.f0(0.3) == doctest::Approx(4));
    CHECK(f.f1(0.3) == doctest::Approx(-9));
    CHECK(f.f2(0.3) == doctest::Approx(8));
    CHECK(f.f3(0.3) == doctest::Approx(-2));
  }
  SUBCASE("a coefficient defined on less than the domain") {
    const SF short_p = c(1).on(Interval{0, 1});
    CHECK_THROWS_AS(second_to_first(second(short_p, c(0), c(0), c(0), c(0))), InvalidInput);
  }
  SUBCASE("variable s brings in ds/dx") {
    // s = x: f2 = q1 - 1 - 2 q2 x + 3 r x^2
    const auto f = second_to_first(second(c(1), c(2), c(3), c(4), X));
    const double x = 0.7;
    CHECK(f.f2(x) == doctest::Approx(2 - 1 - 6 * x + 12 * x * x));
    CHECK(f.f3(x) == doctest::Approx(1 - 2 * x + 3 * x * x - 4 * x * x * x));
  }
}

TEST_CASE("rhs") {
  const auto eq = AbelFirstKind::constant(0, 2, -3, 1);
  CHECK(rhs(eq, 0.0, 1.0) == 0.0);
  CHECK(rhs(eq, 0.0, 0.0) == 0.0);
  CHECK(rhs(eq, 0.0, 3.0) == doctest::Approx(6.0));
  const auto e2 = AbelFirstKind::make(exp(X), c(0), c(0), c(1));
  CHECK(rhs(e2, 0.5, 0.0) == doctest::Approx(std::exp(0.5)));

  const auto v = vein::vein_equation({1.0, -2.0, 1.0});
  CHECK(rhs(v.equation, 0.0, 0.0) == 0.0);
  CHECK(rhs(v.equation, 2.0, 0.0) == 0.0);
}

TEST_CASE("singular coefficient is named") {
  const auto v = vein::vein_equation({1.0, -2.0, 1.0});
  try {
    rhs(v.equation, 0.5, 1.0);
    FAIL("expected a singularity error");
  } catch (const SingularityError& e) {
    CHECK(e.where() == doctest::Approx(0.5));
    CHECK_FALSE(e.coefficient().empty());
  }
}

TEST_CASE("eliminating the linear term") {
  SUBCASE("f1 = 0 is the identity") {
    const auto eq = AbelFirstKind::make(X, c(0), exp(X), c(2), Interval{-1, 1});
    const auto r = eliminate_linear(eq);
    for (double x : {-0.5, 0.0, 0.8}) {
      CHECK(r.reduced.f0(x) == doctest::Approx(x));
      CHECK(r.reduced.f1(x) == 0.0);
      CHECK(r.reduced.f2(x) == doctest::Approx(std::exp(x)));
      CHECK(r.reduced.f3(x) == doctest::Approx(2.0));
      CHECK(r.multiplier(x) == doctest::Approx(1.0));
    }
  }
  SUBCASE("unit linear coefficient on (0, 1)") {
    const auto eq = AbelFirstKind::make(c(0), c(1), c(1), c(1), Interval{0, 1});
    // E(x) = e^x needs E(anchor) = e^anchor
    const auto r = eliminate_linear(eq, std::exp(eq.domain.anchor));
    for (int i = 1; i < 20; ++i) {
      const double x = i / 20.0;
      CHECK(std::abs(r.reduced.f2(x) - std::exp(x)) < 1e-10);
      CHECK(std::abs(r.reduced.f3(x) - std::exp(2 * x)) < 1e-10);
    }
  }
  SUBCASE("rational family") {
    const double a = 1.0, b = -2.0;
    const auto v = vein::vein_equation({a, b, 1.0}).on(-0.9, 0.45);
    const double x0 = v.equation.domain.anchor;
    const auto r = eliminate_linear(v.equation, 1.0 / std::pow(b * x0 + a * a, 2));
    for (double x : {-0.8, -0.3, 0.0, 0.4}) {
      const double d = b * x + a * a;
      CHECK(testing::rel(r.reduced.f2(x), 3 * (a * x + b * b) / std::pow(d, 3)) < 1e-9);
      CHECK(testing::rel(r.reduced.f3(x),
                         (x * x * x - 3 * a * b * x - a * a * a - b * b * b) / std::pow(d, 5)) <
            1e-9);
    }
  }
  SUBCASE("solutions map back through the multiplier") {
    // dz/dx = z^3 E^2 with E = e^x: z = 1/sqrt(c - e^{2x})
    const auto eq = AbelFirstKind::make(c(0), c(1), c(0), c(1), Interval{-1, 0});
    const auto r = eliminate_linear(eq, std::exp(eq.domain.anchor));
    const double cc = 3.0;
    auto z = [&](double x) { return 1.0 / std::sqrt(cc - std::exp(2 * x)); };
    for (double x : {-0.9, -0.5, -0.1}) {
      CHECK(testing::rel(rhs(r.reduced, x, z(x)), testing::fd(z, x)) < 1e-7);
      const double y = z(x) * r.multiplier(x);
      auto yfun = [&](double t) { return z(t) * std::exp(t); };
      CHECK(testing::rel(rhs(eq, x, y), testing::fd(yfun, x)) < 1e-7);
    }
  }
}

TEST_CASE("oscillator correspondence") {
  const auto eq = AbelFirstKind::make(X, exp(X), c(3), sqrt(c(2) + X), Interval{-1, 1});
  const auto osc = oscillator_from_abel(eq);
  const auto back = abel_from_oscillator(osc, eq.domain);
  for (double x : {-0.5, 0.1, 0.9}) {
    CHECK(osc.c0(x) == eq.f0(x));
    CHECK(osc.c1(x) == eq.f1(x));
    CHECK(osc.c2(x) == eq.f2(x));
    CHECK(osc.c3(x) == eq.f3(x));
    CHECK(std::abs(back.f0(x) - eq.f0(x)) <= 1e-12);
    CHECK(std::abs(back.f1(x) - eq.f1(x)) <= 1e-12);
    CHECK(std::abs(back.f2(x) - eq.f2(x)) <= 1e-12);
    CHECK(std::abs(back.f3(x) - eq.f3(x)) <= 1e-12);
  }
  const auto free = oscillator_from_abel(AbelFirstKind::constant(0, 0, 0, 0));
  CHECK(free.c0(1.0) == 0.0);
  CHECK(free.c2(1.0) == 0.0);
  CHECK(free.c3(1.0) == 0.0);
}

TEST_CASE("Riccati reduction") {
  SUBCASE("constant coefficients") {
    const auto r = reduce_to_riccati(AbelFirstKind::constant(1, 0, 1, 0));
    CHECK(r.h0(0.3) == doctest::Approx(1.0));
    CHECK(r.h2(0.3) == doctest::Approx(1.0));
  }
  SUBCASE("separable") {
    const auto r = reduce_to_riccati(AbelFirstKind::make(c(0), c(0), exp(X), c(0)));
    CHECK(r.h0(0.3) == 0.0);
    CHECK(r.h2(0.3) == doctest::Approx(std::exp(0.3)));
  }
  SUBCASE("from the second kind") {
    const double q1 = 2.5;
    const auto f = second_to_first(second(c(0), c(q1), c(0), c(1), c(0)));
    const auto r = reduce_to_riccati(f);
    CHECK(r.h0(0.1) == doctest::Approx(1.0));
    CHECK(r.h2(0.1) == doctest::Approx(q1));
  }
  SUBCASE("cubic term present") {
    CHECK_THROWS_AS(reduce_to_riccati(AbelFirstKind::constant(1, 0, 1, 1)), PreconditionError);
  }
}

TEST_CASE("residual oracle") {
  SUBCASE("dz/dx = z^3, dense exact samples") {
    const auto eq = AbelFirstKind::constant(0, 0, 0, 1);
    std::vector<CurvePoint> pts;
    for (double x : linspace(-1.0, 0.4, 1401)) pts.push_back({x, 1.0 / std::sqrt(1 - 2 * x)});
    CHECK(residual(eq, SampledCurve(pts)) < 1e-6);
  }
  SUBCASE("equilibria have zero residual") {
    const auto eq = AbelFirstKind::constant(0, 2, -3, 1);
    for (double root : {0.0, 1.0, 2.0}) {
      std::vector<CurvePoint> pts;
      for (double x : linspace(0, 1, 11)) pts.push_back({x, root});
      CHECK(residual(eq, SampledCurve(pts)) < 1e-12);  // stencil weights sum to 0 up to rounding
    }
  }
  SUBCASE("a wrong curve is flagged") {
    const auto eq = AbelFirstKind::constant(0, 0, 0, 1);
    std::vector<CurvePoint> pts;
    for (double x : linspace(0, 0.4, 41)) pts.push_back({x, 1.0 + x});
    CHECK(residual(eq, SampledCurve(pts)) > 0.1);
  }
  SUBCASE("too few points") {
    const auto eq = AbelFirstKind::constant(0, 0, 0, 1);
    CHECK_THROWS_AS(residual(eq, SampledCurve({{0, 1}, {0.1, 1}, {0.2, 1}, {0.3, 1}})),
                    InvalidInput);
  }
  SUBCASE("abscissae must increase") {
    CHECK_THROWS_AS(SampledCurve({{0, 1}, {0, 2}}), InvalidInput);
  }
}

TEST_CASE("constant coefficients") {
  SUBCASE("three distinct roots") {
    const auto xs = linspace(-1.0, 1.0, 2001);
    const auto sol = solve_constant_coeffs({0, 2, -3, 1}, 0.0, 0.5, xs);
    CHECK(sol.roots.kind == RootCase::three_distinct_real);
    REQUIRE(sol.roots.real.size() == 3);
    CHECK(sol.roots.real[0] == doctest::Approx(0.0));
    CHECK(sol.roots.real[1] == doctest::Approx(1.0));
    CHECK(sol.roots.real[2] == doctest::Approx(2.0));
    CHECK(residual(AbelFirstKind::constant(0, 2, -3, 1), sol.curve) < 1e-6);
    // y(y-2)/(y-1)^2 = C e^{2x}, C = -3 from y(0) = 1/2
    for (std::size_t i = 0; i < sol.curve.size(); i += 200) {
      const auto [x, y] = sol.curve[i];
      CHECK(y * (y - 2) / ((y - 1) * (y - 1)) == doctest::Approx(-3 * std::exp(2 * x)));
    }
  }
  SUBCASE("triple root closed form") {
    const std::vector<double> xs = {-2.0, -1.0, -0.5, 0.0, 0.25, 0.4};
    const auto sol = solve_constant_coeffs({0, 0, 0, 1}, 0.0, 1.0, xs);
    CHECK(sol.roots.kind == RootCase::triple_real);
    for (const auto& p : sol.curve.points()) {
      CHECK(p.y == 0.0 + 1.0 / std::sqrt(-2.0 * (p.x - 0.5)));
    }
    CHECK(sol.blow_up_forward.has_value());
    CHECK(*sol.blow_up_forward == doctest::Approx(0.5));
  }
  SUBCASE("double root") {
    // (y-1)^2 (y+2) = y^3 - 3y + 2
    const auto xs = linspace(0.0, 0.5, 501);
    const auto sol = solve_constant_coeffs({2, -3, 0, 1}, 0.0, 0.0, xs);
    CHECK(sol.roots.kind == RootCase::double_and_simple_real);
    CHECK(sol.roots.repeated == doctest::Approx(1.0));
    CHECK(sol.roots.simple == doctest::Approx(-2.0));
    CHECK(residual(AbelFirstKind::constant(2, -3, 0, 1), sol.curve) < 1e-6);
  }
  SUBCASE("complex pair") {
    // (y-1)(y^2+1) = y^3 - y^2 + y - 1
    const auto xs = linspace(-0.5, 0.5, 1001);
    const auto sol = solve_constant_coeffs({-1, 1, -1, 1}, 0.0, 0.0, xs);
    CHECK(sol.roots.kind == RootCase::real_and_complex_pair);
    CHECK(sol.roots.alpha == doctest::Approx(0.0));
    CHECK(sol.roots.beta == doctest::Approx(1.0));
    CHECK(residual(AbelFirstKind::constant(-1, 1, -1, 1), sol.curve) < 1e-6);
  }
  SUBCASE("equilibrium start") {
    const auto xs = linspace(-1, 1, 21);
    for (double root : {0.0, 1.0, 2.0}) {
      const auto sol = solve_constant_coeffs({0, 2, -3, 1}, 0.0, root, xs);
      REQUIRE(sol.equilibrium.has_value());
      for (const auto& p : sol.curve.points()) CHECK(p.y == root);
    }
  }
  SUBCASE("scaled leading coefficient") {
    const auto xs = linspace(-0.3, 0.3, 601);
    const std::array<double, 4> A{0, -4, 6, -2};  // -2 y (y-1)(y-2)
    const auto sol = solve_constant_coeffs(A, 0.0, 1.5, xs);
    CHECK(residual(AbelFirstKind::constant(A[0], A[1], A[2], A[3]), sol.curve) < 1e-6);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(solve_constant_coeffs({1, 1, 1, 0}, 0, 0, std::vector<double>{0.0}),
                    PreconditionError);
    try {
      solve_constant_coeffs({0, 0, 0, 1}, 0.0, 1.0, std::vector<double>{0.0, 0.6});
      FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
      CHECK(e.critical() == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("domain anchor and grid") {
  const auto d = Domain::make(0.0, 1.0);
  CHECK(d.anchor == doctest::Approx(0.5));
  const double sing[] = {0.5};
  const auto moved = Domain::make(0.0, 1.0, sing);
  CHECK(std::abs(moved.anchor - 0.5) > 1e-6);
  CHECK(moved.contains(moved.anchor));
  for (double x : d.grid(16)) CHECK(d.contains(x));
}
