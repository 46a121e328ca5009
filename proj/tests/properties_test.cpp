#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "abelkit/abel.hpp"
#include "abelkit/errors.hpp"
#include "abelkit/expression.hpp"
#include "abelkit/integrability.hpp"
#include "abelkit/scalar_function.hpp"
#include "support.hpp"

using namespace abelkit;

namespace {

// roots of the monic cubic from companion-matrix eigenvalues
struct OracleRoots {
  std::vector<double> real;
  bool complex_pair = false;
  double min_gap = 0;
};

OracleRoots oracle(double a2, double a1, double a0) {
  Eigen::Matrix3d C;
  C << 0, 0, -a0, 1, 0, -a1, 0, 1, -a2;
  const Eigen::Vector3cd ev = C.eigenvalues();
  OracleRoots out;
  out.min_gap = INFINITY;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) out.min_gap = std::min(out.min_gap, std::abs(ev(i) - ev(j)));
    if (std::abs(ev(i).imag()) > 1e-7) {
      out.complex_pair = true;
    } else {
      out.real.push_back(ev(i).real());
    }
  }
  std::sort(out.real.begin(), out.real.end());
  return out;
}

// random cubic with a chosen root structure
std::array<double, 4> random_quadruple(int which) {
  const double A3 = (testing::uniform(0, 1) < 0.5 ? -1 : 1) * testing::uniform(0.3, 3);
  const double r1 = testing::uniform(-2, 2);
  double r2 = testing::uniform(-2, 2), r3 = testing::uniform(-2, 2);
  // monic coefficients of (y - r1)(y^2 + p y + q)
  double p = 0, q = 0;
  switch (which) {
    case 0:
      p = -(r2 + r3);
      q = r2 * r3;
      break;
    case 1:
      p = -2 * r2;
      q = r2 * r2;
      break;
    case 2:
      p = -2 * r1;
      q = r1 * r1;
      break;
    default: {
      const double beta = testing::uniform(0.2, 2);
      p = -2 * r2;
      q = r2 * r2 + beta * beta;
    }
  }
  const double m2 = p - r1, m1 = q - r1 * p, m0 = -r1 * q;
  return {A3 * m0, A3 * m1, A3 * m2, A3};
}

}  // namespace

TEST_CASE("root case agrees with the companion-matrix oracle") {
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 4> A;
    if (i % 2 == 0) {
      A = {testing::uniform(-3, 3), testing::uniform(-3, 3), testing::uniform(-3, 3),
           testing::uniform(0.2, 3)};
    } else {
      A = random_quadruple(i / 2 % 4);
    }
    const auto r = classify_cubic(A[2] / A[3], A[1] / A[3], A[0] / A[3]);
    const auto o = oracle(A[2] / A[3], A[1] / A[3], A[0] / A[3]);
    if (o.min_gap < 1e-3 && r.kind != RootCase::triple_real &&
        r.kind != RootCase::double_and_simple_real)
      continue;  // near tie, either label is acceptable
    if (o.min_gap < 1e-3) continue;
    ++compared;
    if (o.complex_pair) {
      CHECK(r.kind == RootCase::real_and_complex_pair);
      CHECK(r.real.size() == 1);
      CHECK(std::abs(r.real[0] - o.real[0]) < 1e-8);
    } else {
      CHECK(r.kind == RootCase::three_distinct_real);
      REQUIRE(r.real.size() == 3);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(r.real[k] - o.real[k]) < 1e-7);
    }
  }
  CHECK(compared > 600);
}

TEST_CASE("constructed repeated roots are labelled") {
  const auto dbl = classify_cubic(-3 * 0.0 - 0, -3, 2);  // (y-1)^2 (y+2)
  CHECK(dbl.kind == RootCase::double_and_simple_real);
  const auto tri = classify_cubic(-3, 3, -1);  // (y-1)^3
  CHECK(tri.kind == RootCase::triple_real);
  CHECK(tri.real == std::vector<double>{1.0});
}

TEST_CASE("closed-form solutions have small residual") {
  for (int i = 0; i < 40; ++i) {
    const auto A = random_quadruple(i % 4);
    const auto roots = classify_cubic(A[2] / A[3], A[1] / A[3], A[0] / A[3]);
    double y0 = testing::uniform(-2.5, 2.5);
    bool near_root = false;
    for (double r : roots.real) near_root = near_root || std::abs(y0 - r) < 0.05;
    if (near_root) continue;
    const auto probe = solve_constant_coeffs(A, 0.0, y0, {});
    // half the distance to a blow-up, resolved by the same number of nodes at every scale
    double w = 1.0;
    if (probe.blow_up_forward) w = std::min(w, 0.5 * *probe.blow_up_forward);
    if (probe.blow_up_backward) w = std::min(w, -0.5 * *probe.blow_up_backward);
    const auto xs = linspace(-w, w, 2001);
    const auto sol = solve_constant_coeffs(A, 0.0, y0, xs);
    CAPTURE(i);
    CHECK(residual(AbelFirstKind::constant(A[0], A[1], A[2], A[3]), sol.curve) < 1e-6);
  }
}

TEST_CASE("scalar function derivatives match finite differences") {
  const auto X = ScalarFunction::identity();
  const auto one = ScalarFunction::constant(1.0);
  const ScalarFunction fs[] = {exp(X) * X, pow(X, 3) - X, sqrt(one + X * X), one / (one + X * X),
                               exp(-(X * X)), antiderivative(exp(X), 0.0),
                               exp_antiderivative(X, 0.0, 2.0)};
  for (const auto& f : fs) {
    for (int i = 0; i < 20; ++i) {
      const double x = testing::uniform(-1.5, 1.5);
      const double want = testing::fd([&](double t) { return f(t); }, x);
      CHECK(std::abs(f.derivative(x) - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("singular points are guarded") {
  const auto X = ScalarFunction::identity();
  const auto f = ScalarFunction("g", [](double x) { return 1 / x; }, [](double x) { return -1 / (x * x); },
                                {0.0});
  CHECK_THROWS_AS(f(0.0), SingularityError);
  CHECK_THROWS_AS((f * X)(1e-12), SingularityError);
  try {
    (X + f)(0.0);
  } catch (const SingularityError& e) {
    CHECK(e.coefficient() == "g");
  }
  CHECK(f(2.0) == 0.5);
}

TEST_CASE("anchored antiderivatives") {
  const auto X = ScalarFunction::identity();
  const auto F = antiderivative(X * X, 1.0);
  CHECK(F(1.0) == 0.0);
  CHECK(F(2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  CHECK(F(-1.0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  const auto E = exp_antiderivative(ScalarFunction::constant(1.0), 0.0, 3.0);
  CHECK(E(1.0) == doctest::Approx(3 * std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("random expression trees round-trip") {
  const expr::Parameters p{{"a", 1.5}, {"b", -0.5}, {"k", 2.0}};
  const char* atoms[] = {"x", "a", "b", "k", "2", "0.5", "3e-2"};
  const char* funcs[] = {"exp", "ln", "sin", "cos", "sqrt", "arctan"};
  const char* ops[] = {"+", "-", "*", "/"};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    const int pick = static_cast<int>(testing::uniform(0, depth > 0 ? 5 : 1));
    if (pick == 0) return atoms[static_cast<int>(testing::uniform(0, 7))];
    if (pick == 1) return std::string(funcs[static_cast<int>(testing::uniform(0, 6))]) + "(" + gen(depth - 1) + ")";
    if (pick == 2) return "-" + gen(depth - 1);
    if (pick == 3) return "(" + gen(depth - 1) + ")^" + std::to_string(static_cast<int>(testing::uniform(-3, 4)));
    return "(" + gen(depth - 1) + ops[static_cast<int>(testing::uniform(0, 4))] + gen(depth - 1) + ")";
  };
  for (int i = 0; i < 500; ++i) {
    const std::string text = gen(4);
    CAPTURE(text);
    const auto e = expr::Expression::parse(text, p);
    const auto again = expr::Expression::parse(e.unparse(), p);
    CHECK(again == e);
    const double x = testing::uniform(0.1, 1.0);
    const double v1 = e.eval(x), v2 = again.eval(x);
    CHECK(((std::isnan(v1) && std::isnan(v2)) || v1 == v2));
  }
}

TEST_CASE("oscillator mapping is an involution") {
  const auto X = ScalarFunction::identity();
  for (int i = 0; i < 20; ++i) {
    const double c0 = testing::uniform(-2, 2), c1 = testing::uniform(-2, 2);
    const auto eq = AbelFirstKind::make(ScalarFunction::constant(c0), c1 * X, exp(X),
                                        ScalarFunction::constant(1.0) + X * X, Interval{-1, 1});
    const auto back = abel_from_oscillator(oscillator_from_abel(eq), eq.domain);
    const double x = testing::uniform(-0.9, 0.9);
    CHECK(std::abs(back.f0(x) - eq.f0(x)) <= 1e-12);
    CHECK(std::abs(back.f1(x) - eq.f1(x)) <= 1e-12);
    CHECK(std::abs(back.f2(x) - eq.f2(x)) <= 1e-12);
    CHECK(std::abs(back.f3(x) - eq.f3(x)) <= 1e-12);
  }
}
