#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abelkit/errors.hpp"
#include "abelkit/hyperbolic3.hpp"
#include "support.hpp"

namespace h3 = abelkit::hyperbolic3;

TEST_CASE("triad at the origin") {
  const auto t = h3::phi(0.0);
  CHECK(t.phi1 == 1.0L);
  CHECK(std::abs(t.phi2) < 1e-18L);
  CHECK(std::abs(t.phi3) < 1e-18L);
}

TEST_CASE("triad against the power series") {
  // phi_k(x) = sum over n = k-1 mod 3 of x^n / n!
  for (double x : {-2.5, -0.4, 0.3, 1.0, 3.2}) {
    long double s[3] = {0, 0, 0};
    long double term = 1;
    for (int n = 0; n < 80; ++n) {
      s[n % 3] += term;
      term *= x / (n + 1);
    }
    const auto t = h3::phi(x);
    CHECK(std::abs(static_cast<double>(t.phi1 - s[0])) < 1e-14 * std::exp(std::abs(x)));
    CHECK(std::abs(static_cast<double>(t.phi2 - s[1])) < 1e-14 * std::exp(std::abs(x)));
    CHECK(std::abs(static_cast<double>(t.phi3 - s[2])) < 1e-14 * std::exp(std::abs(x)));
  }
}

TEST_CASE("sum and cubic identities on [-8, 8]") {
  for (int i = 0; i < 1000; ++i) {
    const double x = -8.0 + 16.0 * i / 999.0;
    const auto t = h3::phi(x);
    CHECK(std::abs(static_cast<double>(t.sum()) / std::exp(x) - 1.0) < 1e-12);
    CHECK(std::abs(static_cast<double>(t.cubic_form() - 1.0L)) < 1e-10);
  }
}

TEST_CASE("cyclic derivatives") {
  const auto d1 = h3::phi_derivative(0.0, 1);
  CHECK(std::abs(d1.phi1) < 1e-18L);
  CHECK(d1.phi2 == 1.0L);
  CHECK(std::abs(d1.phi3) < 1e-18L);

  for (int i = 0; i < 20; ++i) {
    const double x = testing::uniform(-4, 4);
    const auto t = h3::phi(x);
    const auto t3 = h3::phi_derivative(x, 3);
    CHECK(t3.phi1 == t.phi1);
    CHECK(t3.phi2 == t.phi2);
    CHECK(t3.phi3 == t.phi3);
    const auto d = h3::phi_derivative(x, 1);
    auto comp = [](int k) {
      return [k](double s) {
        const auto p = h3::phi(s);
        return static_cast<double>(k == 0 ? p.phi1 : k == 1 ? p.phi2 : p.phi3);
      };
    };
    CHECK(testing::rel(static_cast<double>(d.phi1), testing::fd(comp(0), x)) < 1e-6);
    CHECK(testing::rel(static_cast<double>(d.phi2), testing::fd(comp(1), x)) < 1e-6);
    CHECK(testing::rel(static_cast<double>(d.phi3), testing::fd(comp(2), x)) < 1e-6);
  }
}

TEST_CASE("wronskian") {
  CHECK(h3::wronskian(0.0) == 1.0L);
  CHECK(std::abs(static_cast<double>(h3::wronskian(1.0) - 1.0L)) < 1e-10);
  CHECK(std::abs(static_cast<double>(h3::wronskian(-5.0) - 1.0L)) < 1e-9);
  for (int i = 0; i < 200; ++i) {
    const double x = testing::uniform(-8, 8);
    CHECK(std::abs(static_cast<double>(h3::wronskian(x) - 1.0L)) < 1e-8);
  }
}

TEST_CASE("t-functions") {
  SUBCASE("at s = 0") {
    const auto d = h3::t_derivatives(0.0, 2.5, 1);
    CHECK(d.t == 2.5L);
    CHECK(d.dt == 1.0L);
    CHECK(std::abs(d.d2t) < 1e-18L);
  }
  SUBCASE("consistency with the triad") {
    for (int i = 0; i < 20; ++i) {
      const double s = testing::uniform(-5, 5);
      const double c = testing::uniform(-3, 3);
      const auto p = h3::phi(s);
      const auto t = h3::t_functions(s, c);
      CHECK(t.t1 == c * p.phi1 + p.phi2);
      CHECK(t.t2 == c * p.phi2 + p.phi3);
      CHECK(t.t3 == c * p.phi3 + p.phi1);
    }
  }
  SUBCASE("third derivative returns t") {
    for (int i = 0; i < 20; ++i) {
      const double s = testing::uniform(-5, 5);
      const double c = testing::uniform(-3, 3);
      for (int family = 1; family <= 3; ++family) {
        const auto d = h3::t_derivatives(s, c, family);
        const auto d3 = h3::differentiate(h3::differentiate(h3::differentiate(d)));
        CHECK(d3.t == d.t);
        CHECK(d3.dt == d.dt);
        CHECK(d3.d2t == d.d2t);
      }
    }
  }
  SUBCASE("finite-difference slope") {
    for (int i = 0; i < 20; ++i) {
      const double s = testing::uniform(-4, 4);
      const double c = testing::uniform(-3, 3);
      for (int family = 1; family <= 3; ++family) {
        const auto d = h3::t_derivatives(s, c, family);
        const double want = testing::fd(
            [&](double u) { return static_cast<double>(h3::t_derivatives(u, c, family).t); }, s);
        CHECK(std::abs(static_cast<double>(d.dt) - want) <
              1e-6 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("non-finite argument") {
  CHECK_THROWS_AS(h3::phi(std::nan("")), abelkit::InvalidInput);
  CHECK_THROWS_AS(h3::phi(INFINITY), abelkit::InvalidInput);
}
