#include "abelkit/rational.hpp"

#include <algorithm>

namespace abelkit {

Polynomial Polynomial::derivative() const {
  if (c.size() <= 1) return {{0.0}};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return {d};
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial out{{1.0}};
  for (unsigned i = 0; i < n; ++i) out = out * *this;
  return out;
}

bool Polynomial::is_constant() const {
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] != 0.0) return false;
  }
  return true;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<double> out(std::max(p.c.size(), q.c.size()), 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i) out[i] += p.c[i];
  for (std::size_t i = 0; i < q.c.size(); ++i) out[i] += q.c[i];
  return {out};
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.c.empty() || q.c.empty()) return {{0.0}};
  std::vector<double> out(p.c.size() + q.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    for (std::size_t j = 0; j < q.c.size(); ++j) out[i + j] += p.c[i] * q.c[j];
  }
  return {out};
}

Polynomial operator*(double s, const Polynomial& p) {
  Polynomial out = p;
  for (double& v : out.c) v *= s;
  return out;
}

Rational::Rational(Polynomial n, Polynomial d)
    : num(std::move(n)), den(std::move(d)), dnum(num.derivative()), dden(den.derivative()) {}

ScalarFunction Rational::function(std::string name, std::vector<double> singularities,
                                  Interval domain) const {
  const Rational self = *this;
  return ScalarFunction(
      std::move(name), [self](double x) { return self(x); },
      [self](double x) { return self.derivative(x); }, std::move(singularities), domain);
}

}  // namespace abelkit
