#include "abelkit/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abelkit/errors.hpp"
#include "abelkit/numerics.hpp"

namespace abelkit {

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

struct ScalarFunction::Impl {
  std::string name;
  Map value;
  Map deriv;
  std::vector<double> singularities;
  Interval domain;
  std::optional<double> constant;
  std::optional<double> anchor;
  bool guard = true;
};

namespace {

double central_difference(const ScalarFunction::Map& f, double x) {
  const double h = std::max(1e-6, 1e-6 * std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

std::vector<double> merge(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

}  // namespace

ScalarFunction make_composite(std::string name, ScalarFunction::Map value,
                              ScalarFunction::Map deriv, std::vector<double> singular,
                              Interval domain, std::optional<double> constant) {
  auto impl = std::make_shared<ScalarFunction::Impl>();
  impl->name = std::move(name);
  impl->value = std::move(value);
  impl->deriv = std::move(deriv);
  impl->singularities = std::move(singular);
  impl->domain = domain;
  impl->constant = constant;
  impl->guard = false;
  return ScalarFunction(std::shared_ptr<const ScalarFunction::Impl>(std::move(impl)));
}

ScalarFunction::ScalarFunction() : ScalarFunction(constant(0.0)) {}

ScalarFunction::ScalarFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ScalarFunction::ScalarFunction(std::string name, Map value, Map deriv,
                               std::vector<double> singularities, Interval domain) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->value = std::move(value);
  impl->deriv = std::move(deriv);
  std::sort(singularities.begin(), singularities.end());
  impl->singularities = std::move(singularities);
  impl->domain = domain;
  impl_ = std::move(impl);
}

ScalarFunction ScalarFunction::constant(double c, std::string name) {
  if (name.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    name = os.str();
  }
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->value = [c](double) { return c; };
  impl->deriv = [](double) { return 0.0; };
  impl->constant = c;
  return ScalarFunction(std::shared_ptr<const Impl>(std::move(impl)));
}

ScalarFunction ScalarFunction::identity(std::string name) {
  return ScalarFunction(std::move(name), [](double x) { return x; }, [](double) { return 1.0; });
}

ScalarFunction ScalarFunction::with_numeric_derivative(std::string name, Map value,
                                                       std::vector<double> singularities,
                                                       Interval domain) {
  Map deriv = [value](double x) { return central_difference(value, x); };
  return ScalarFunction(std::move(name), std::move(value), std::move(deriv),
                        std::move(singularities), domain);
}

bool ScalarFunction::near_singularity(double x, double radius) const {
  return std::any_of(impl_->singularities.begin(), impl_->singularities.end(),
                     [&](double s) { return std::abs(x - s) < radius; });
}

double ScalarFunction::operator()(double x) const {
  const Impl& f = *impl_;
  if (f.guard) {
    if (!f.domain.contains(x)) {
      throw InvalidInput("coefficient '" + f.name + "' evaluated outside its domain at x = " +
                         std::to_string(x));
    }
    for (double s : f.singularities) {
      if (std::abs(x - s) < kSingularityRadius) {
        throw SingularityError(f.name, s,
                               "coefficient '" + f.name + "' is singular at x = " +
                                   std::to_string(s));
      }
    }
  }
  const double v = f.value(x);
  if (!std::isfinite(v)) {
    throw SingularityError(f.name, x,
                           "coefficient '" + f.name + "' is not finite at x = " + std::to_string(x));
  }
  return v;
}

double ScalarFunction::derivative(double x) const {
  if (impl_->guard) (void)(*this)(x);
  const double d = impl_->deriv(x);
  if (!std::isfinite(d)) {
    throw SingularityError(impl_->name, x,
                           "derivative of '" + impl_->name + "' is not finite at x = " +
                               std::to_string(x));
  }
  return d;
}

ScalarFunction ScalarFunction::derivative_function() const {
  if (impl_->constant) return constant(0.0);
  ScalarFunction self = *this;
  Map d = [self](double x) { return self.derivative(x); };
  return make_composite("d(" + impl_->name + ")/dx", d,
                        [d](double x) { return central_difference(d, x); }, impl_->singularities,
                        impl_->domain, std::nullopt);
}

const std::string& ScalarFunction::name() const { return impl_->name; }

ScalarFunction ScalarFunction::named(std::string name) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->name = std::move(name);
  return ScalarFunction(std::shared_ptr<const Impl>(std::move(impl)));
}

const std::vector<double>& ScalarFunction::singularities() const { return impl_->singularities; }
const Interval& ScalarFunction::domain() const { return impl_->domain; }

ScalarFunction ScalarFunction::on(Interval domain) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->domain = domain;
  return ScalarFunction(std::shared_ptr<const Impl>(std::move(impl)));
}

std::optional<double> ScalarFunction::constant_value() const { return impl_->constant; }
bool ScalarFunction::is_zero() const { return impl_->constant && *impl_->constant == 0.0; }
std::optional<double> ScalarFunction::anchor() const { return impl_->anchor; }

// --- arithmetic -------------------------------------------------------------

ScalarFunction operator+(const ScalarFunction& f, const ScalarFunction& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (f.constant_value() && g.constant_value()) {
    return ScalarFunction::constant(*f.constant_value() + *g.constant_value());
  }
  return make_composite(
      paren(f.name() + "+" + g.name()), [f, g](double x) { return f(x) + g(x); },
      [f, g](double x) { return f.derivative(x) + g.derivative(x); },
      merge(f.singularities(), g.singularities()), intersect(f.domain(), g.domain()),
      std::nullopt);
}

ScalarFunction operator-(const ScalarFunction& f, const ScalarFunction& g) {
  if (g.is_zero()) return f;
  if (f.constant_value() && g.constant_value()) {
    return ScalarFunction::constant(*f.constant_value() - *g.constant_value());
  }
  return make_composite(
      paren(f.name() + "-" + g.name()), [f, g](double x) { return f(x) - g(x); },
      [f, g](double x) { return f.derivative(x) - g.derivative(x); },
      merge(f.singularities(), g.singularities()), intersect(f.domain(), g.domain()),
      std::nullopt);
}

ScalarFunction operator*(const ScalarFunction& f, const ScalarFunction& g) {
  if (f.is_zero() || g.is_zero()) return ScalarFunction::constant(0.0);
  if (f.constant_value() && *f.constant_value() == 1.0) return g;
  if (g.constant_value() && *g.constant_value() == 1.0) return f;
  if (f.constant_value() && g.constant_value()) {
    return ScalarFunction::constant(*f.constant_value() * *g.constant_value());
  }
  return make_composite(
      paren(f.name() + "*" + g.name()), [f, g](double x) { return f(x) * g(x); },
      [f, g](double x) { return f.derivative(x) * g(x) + f(x) * g.derivative(x); },
      merge(f.singularities(), g.singularities()), intersect(f.domain(), g.domain()),
      std::nullopt);
}

ScalarFunction operator/(const ScalarFunction& f, const ScalarFunction& g) {
  if (f.is_zero()) return ScalarFunction::constant(0.0);
  if (g.constant_value() && *g.constant_value() == 1.0) return f;
  if (f.constant_value() && g.constant_value() && *g.constant_value() != 0.0) {
    return ScalarFunction::constant(*f.constant_value() / *g.constant_value());
  }
  const std::string name = paren(f.name() + "/" + g.name());
  return make_composite(
      name,
      [f, g, name](double x) {
        const double d = g(x);
        if (d == 0.0) {
          throw SingularityError(g.name(), x,
                                 "division by zero coefficient '" + g.name() + "' in '" + name +
                                     "' at x = " + std::to_string(x));
        }
        return f(x) / d;
      },
      [f, g](double x) {
        const double d = g(x);
        return (f.derivative(x) * d - f(x) * g.derivative(x)) / (d * d);
      },
      merge(f.singularities(), g.singularities()), intersect(f.domain(), g.domain()),
      std::nullopt);
}

ScalarFunction operator-(const ScalarFunction& f) { return ScalarFunction::constant(-1.0) * f; }

ScalarFunction operator*(double c, const ScalarFunction& f) {
  return ScalarFunction::constant(c) * f;
}

ScalarFunction exp(const ScalarFunction& f) {
  if (f.constant_value()) return ScalarFunction::constant(std::exp(*f.constant_value()));
  return make_composite(
      "exp" + paren(f.name()), [f](double x) { return std::exp(f(x)); },
      [f](double x) { return f.derivative(x) * std::exp(f(x)); }, f.singularities(), f.domain(),
      std::nullopt);
}

ScalarFunction pow(const ScalarFunction& f, int n) {
  if (n == 0) return ScalarFunction::constant(1.0);
  if (n == 1) return f;
  if (f.constant_value()) return ScalarFunction::constant(std::pow(*f.constant_value(), n));
  return make_composite(
      paren(f.name()) + "^" + std::to_string(n), [f, n](double x) { return std::pow(f(x), n); },
      [f, n](double x) { return n * std::pow(f(x), n - 1) * f.derivative(x); }, f.singularities(),
      f.domain(), std::nullopt);
}

ScalarFunction sqrt(const ScalarFunction& f) {
  if (f.constant_value() && *f.constant_value() >= 0.0) {
    return ScalarFunction::constant(std::sqrt(*f.constant_value()));
  }
  return make_composite(
      "sqrt" + paren(f.name()), [f](double x) { return std::sqrt(f(x)); },
      [f](double x) { return 0.5 * f.derivative(x) / std::sqrt(f(x)); }, f.singularities(),
      f.domain(), std::nullopt);
}

// --- antiderivatives ----------------------------------------------------------

ScalarFunction antiderivative(const ScalarFunction& f, double anchor, double abs_tol) {
  auto impl = std::make_shared<ScalarFunction::Impl>();
  impl->name = "int(" + f.name() + ")";
  impl->singularities = f.singularities();
  impl->domain = f.domain();
  impl->anchor = anchor;
  impl->guard = false;
  if (f.is_zero()) {
    impl->constant = 0.0;
    impl->value = [](double) { return 0.0; };
    impl->deriv = [](double) { return 0.0; };
    return ScalarFunction(std::shared_ptr<const ScalarFunction::Impl>(std::move(impl)));
  }
  const std::string name = impl->name;
  impl->value = [f, anchor, abs_tol, name](double x) {
    if (x == anchor) return 0.0;
    const double lo = std::min(anchor, x);
    const double hi = std::max(anchor, x);
    for (double s : f.singularities()) {
      if (s > lo - kSingularityRadius && s < hi + kSingularityRadius) {
        throw SingularityError(f.name(), s,
                               "integration path of '" + name + "' from anchor " +
                                   std::to_string(anchor) + " to " + std::to_string(x) +
                                   " crosses singular point " + std::to_string(s));
      }
    }
    return numerics::integrate([&f](double t) { return f(t); }, anchor, x, abs_tol).value;
  };
  impl->deriv = [f](double x) { return f(x); };
  return ScalarFunction(std::shared_ptr<const ScalarFunction::Impl>(std::move(impl)));
}

ScalarFunction exp_antiderivative(const ScalarFunction& f, double anchor, double value_at_anchor,
                                  double abs_tol) {
  return value_at_anchor * exp(antiderivative(f, anchor, abs_tol));
}

bool vanishes_on(const ScalarFunction& f, const std::vector<double>& grid, double tol) {
  if (f.constant_value()) return std::abs(*f.constant_value()) <= tol;
  return std::all_of(grid.begin(), grid.end(), [&](double x) { return std::abs(f(x)) <= tol; });
}

}  // namespace abelkit
