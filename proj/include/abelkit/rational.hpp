#pragma once

#include <string>
#include <vector>

#include "abelkit/scalar_function.hpp"

namespace abelkit {

/// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<double> c;

  template <class T>
  T operator()(T x) const {
    T acc = T(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  Polynomial derivative() const;
  Polynomial pow(unsigned n) const;
  /// Numerically constant (degree <= 0 after trimming exact zeros).
  bool is_constant() const;
};

Polynomial operator+(const Polynomial& p, const Polynomial& q);
Polynomial operator*(const Polynomial& p, const Polynomial& q);
Polynomial operator*(double s, const Polynomial& p);

/// num / den with derivatives by the quotient rule on the stored polynomials.
struct Rational {
  Polynomial num;
  Polynomial den;
  Polynomial dnum;
  Polynomial dden;

  Rational(Polynomial n, Polynomial d);

  template <class T>
  T operator()(T x) const {
    return num(x) / den(x);
  }
  template <class T>
  T derivative(T x) const {
    const T d = den(x);
    return (dnum(x) * d - num(x) * dden(x)) / (d * d);
  }

  /// Leaf ScalarFunction guarding the given singular points.
  ScalarFunction function(std::string name, std::vector<double> singularities,
                          Interval domain = {}) const;
};

}  // namespace abelkit
