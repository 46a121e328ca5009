#include <doctest.h>

#include <cmath>

#include "abelkit/errors.hpp"
#include "abelkit/expression.hpp"
#include "support.hpp"

using abelkit::ParseError;
using abelkit::expr::Expression;
using abelkit::expr::Parameters;

TEST_CASE("identity expression") {
  const auto e = Expression::parse("x");
  for (double x : {-3.0, 0.0, 0.25, 7.0}) {
    CHECK(e.eval(x) == x);
    CHECK(e.eval_dual(x).d == 1.0);
  }
}

TEST_CASE("exp(2*x) has slope 2 at the origin") {
  const auto e = Expression::parse("exp(2*x)");
  CHECK(e.eval_dual(0.0).d == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(testing::fd([&](double x) { return e.eval(x); }, 0.0) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("f2 of the rational family from text") {
  for (auto [a, b] : {std::pair{1.0, -2.0}, {0.5, 1.5}, {-2.0, 0.3}}) {
    const Parameters p{{"a", a}, {"b", b}};
    const auto e = Expression::parse("3*(a*x+b^2)/(b*x+a^2)", p);
    for (double x : {-1.3, 0.0, 0.7, 2.4}) {
      if (std::abs(b * x + a * a) < 1e-3) continue;
      CHECK(e.eval(x) == doctest::Approx(3 * (a * x + b * b) / (b * x + a * a)).epsilon(1e-14));
    }
  }
}

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("2^3^2").eval(0) == 512.0);
  CHECK(Expression::parse("-x^2").eval(3) == -9.0);
  CHECK(Expression::parse("(-x)^2").eval(3) == 9.0);
  CHECK(Expression::parse("1-2-3").eval(0) == -4.0);
  CHECK(Expression::parse("8/4/2").eval(0) == 1.0);
  CHECK(Expression::parse("1+2*3").eval(0) == 7.0);
  CHECK(Expression::parse("x^-1").eval(4) == 0.25);
  CHECK(Expression::parse("2.5e-1*x").eval(4) == 1.0);
}

TEST_CASE("functions") {
  const double x = 0.7;
  CHECK(Expression::parse("ln(x)").eval(x) == doctest::Approx(std::log(x)));
  CHECK(Expression::parse("sin(x)").eval(x) == doctest::Approx(std::sin(x)));
  CHECK(Expression::parse("cos(x)").eval(x) == doctest::Approx(std::cos(x)));
  CHECK(Expression::parse("sqrt(x)").eval(x) == doctest::Approx(std::sqrt(x)));
  CHECK(Expression::parse("arctan(x)").eval(x) == doctest::Approx(std::atan(x)));
}

TEST_CASE("round trip through unparse") {
  const Parameters p{{"a", 1.25}, {"b", -2.0}, {"k", 0.5}};
  for (const char* text :
       {"x", "3*(a*x+b^2)/(b*x+a^2)", "(x^3-3*a*b*x-a^3-b^3)/(b*x+a^2)", "-2*b/(b*x+a^2)",
        "exp(-x^2)*sin(3*x)+k", "sqrt(1+x^2)-ln(2+cos(x))", "arctan(x)^-2", "--x", "1e-3*x",
        "0.1+0.2", "2^3^2", "-(x-1)^4/(k*x+7)"}) {
    CAPTURE(text);
    const auto e = Expression::parse(text, p);
    const auto back = Expression::parse(e.unparse(), p);
    CHECK(back == e);
    CHECK(back.unparse() == e.unparse());
  }
}

TEST_CASE("dual derivative against finite differences") {
  const Parameters p{{"a", 0.8}, {"b", -1.1}};
  for (const char* text : {"exp(2*x)", "x^5-3*x", "sin(x)*cos(2*x)", "sqrt(2+x^2)",
                           "ln(3+x)", "arctan(x/2)", "(a*x+b^2)/(b*x+a^2)", "x^-3",
                           "exp(-x)/(1+x^2)"}) {
    CAPTURE(text);
    const auto e = Expression::parse(text, p);
    for (int i = 0; i < 20; ++i) {
      const double x = testing::uniform(0.2, 1.5);
      CAPTURE(x);
      const double want = testing::fd([&](double t) { return e.eval(t); }, x, 1e-4);
      CHECK(testing::rel(e.eval_dual(x).d, want) < 1e-6);
    }
  }
}

TEST_CASE("to_function carries the dual derivative") {
  const auto f = Expression::parse("x^2*exp(x)").to_function("f");
  CHECK(f(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(f.derivative(1.0) == doctest::Approx(3 * std::exp(1.0)));
  CHECK(f.name() == "f");
}

TEST_CASE("parse errors report offset and expected tokens") {
  auto offset_of = [](const char* text) -> long {
    try {
      Expression::parse(text);
    } catch (const ParseError& e) {
      CHECK(e.code() == abelkit::ErrorCode::parse);
      CHECK_FALSE(e.expected().empty());
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("1+") == 2);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x*)") == 2);
  CHECK(offset_of("x $ 2") == 2);
  CHECK(offset_of("y") == 0);
  CHECK(offset_of("2*a") == 2);
  CHECK(offset_of("x^1.5") >= 2);
  CHECK(offset_of("x^y") >= 2);
  CHECK(offset_of("foo(x)") == 0);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("x x") == 2);
}

TEST_CASE("unknown identifiers are errors, not free variables") {
  CHECK_THROWS_AS(Expression::parse("a*x"), ParseError);
  CHECK_NOTHROW(Expression::parse("a*x", {{"a", 2.0}}));
}
