#include "abelkit/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "abelkit/errors.hpp"
#include "abelkit/format.hpp"

namespace abelkit::expr {

const char* to_string(Func f) noexcept {
  switch (f) {
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::sqrt: return "sqrt";
    case Func::arctan: return "arctan";
  }
  return "?";
}

bool equal(const Node& l, const Node& r) {
  if (l.kind != r.kind) return false;
  switch (l.kind) {
    case Kind::constant: return l.value == r.value;
    case Kind::variable: return true;
    case Kind::parameter: return l.name == r.name && l.value == r.value;
    case Kind::neg: return equal(*l.lhs, *r.lhs);
    case Kind::pow: return l.exponent == r.exponent && equal(*l.lhs, *r.lhs);
    case Kind::call: return l.func == r.func && equal(*l.lhs, *r.lhs);
    default: return equal(*l.lhs, *r.lhs) && equal(*l.rhs, *r.rhs);
  }
}

namespace {

const std::pair<const char*, Func> kFunctions[] = {
    {"exp", Func::exp}, {"ln", Func::ln},     {"sin", Func::sin},
    {"cos", Func::cos}, {"sqrt", Func::sqrt}, {"arctan", Func::arctan},
};

NodePtr make(Kind k, NodePtr lhs = {}, NodePtr rhs = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const Parameters& params) : text_(text), params_(params) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail({"+", "-", "*", "/", "^", "end of input"}, "unexpected input");
    return e;
  }

 private:
  std::string_view text_;
  const Parameters& params_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) {
    fail_at(pos_, std::move(expected), what);
  }

  [[noreturn]] void fail_at(std::size_t at, std::vector<std::string> expected,
                            const std::string& what) {
    std::string msg = what + " at byte " + std::to_string(at) + "; expected one of:";
    for (const auto& e : expected) msg += " '" + e + "'";
    throw ParseError(at, std::move(expected), msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<std::string> operand_tokens() const {
    std::vector<std::string> out{"number", "x", "(", "-"};
    for (const auto& [name, f] : kFunctions) out.emplace_back(name);
    for (const auto& [name, v] : params_) out.push_back(name);
    return out;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_space();
    if (!accept('^')) return base;
    auto n = std::make_shared<Node>();
    n->kind = Kind::pow;
    n->lhs = base;
    n->exponent = exponent();
    return n;
  }

  /// Integer exponent: [-] digits [^ exponent], optionally parenthesised.
  int exponent() {
    skip_space();
    const std::size_t start = pos_;
    if (accept('(')) {
      const int e = exponent();
      if (!accept(')')) fail({")"}, "unclosed exponent");
      return e;
    }
    const bool negative = accept('-');
    skip_space();
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      fail_at(start, {"integer", "-", "("}, "exponent of ^ must be an integer literal");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                                std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
      fail_at(start, {"integer"}, "non-integer exponent on ^");
    }
    long long value = 0;
    const auto res = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (res.ec != std::errc() || value > 4096) fail_at(start, {"integer"}, "exponent too large");
    long long e = negative ? -value : value;
    skip_space();
    if (accept('^')) {
      const int inner = exponent();
      if (inner < 0) fail_at(start, {"integer"}, "non-integer exponent on ^");
      long long p = 1;
      for (int i = 0; i < inner; ++i) {
        p *= e;
        if (std::llabs(p) > 4096) fail_at(start, {"integer"}, "exponent too large");
      }
      e = p;
    }
    return static_cast<int>(e);
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(operand_tokens(), "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!accept(')')) fail({")", "+", "-", "*", "/", "^"}, "unclosed parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(operand_tokens(), "unexpected character");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(v)) {
      fail_at(start, {"number"}, "malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    for (const auto& [name, f] : kFunctions) {
      if (id == name) {
        if (!accept('(')) fail({"("}, "function '" + std::string(id) + "' needs an argument");
        auto n = std::make_shared<Node>();
        n->kind = Kind::call;
        n->func = f;
        n->lhs = expression();
        if (!accept(')')) fail({")"}, "unclosed call");
        return n;
      }
    }
    if (id == "x") return make(Kind::variable);
    if (auto it = params_.find(id); it != params_.end()) {
      auto n = std::make_shared<Node>();
      n->kind = Kind::parameter;
      n->name = it->first;
      n->value = it->second;
      return n;
    }
    fail_at(start, operand_tokens(), "unknown identifier '" + std::string(id) + "'");
  }
};

void unparse_into(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::constant: out += format_number(n.value); return;
    case Kind::variable: out += "x"; return;
    case Kind::parameter: out += n.name; return;
    case Kind::neg:
      out += "(-";
      unparse_into(*n.lhs, out);
      out += ")";
      return;
    case Kind::pow:
      out += "(";
      unparse_into(*n.lhs, out);
      out += "^" + std::to_string(n.exponent) + ")";
      return;
    case Kind::call:
      out += to_string(n.func);
      out += "(";
      unparse_into(*n.lhs, out);
      out += ")";
      return;
    default: break;
  }
  const char* op = n.kind == Kind::add ? " + " : n.kind == Kind::sub ? " - " : n.kind == Kind::mul ? " * " : " / ";
  out += "(";
  unparse_into(*n.lhs, out);
  out += op;
  unparse_into(*n.rhs, out);
  out += ")";
}

Dual ipow(Dual b, int e) {
  if (e == 0) return {1.0, 0.0};
  const double p = std::pow(b.v, e);
  const double dp = e * std::pow(b.v, e - 1) * b.d;
  return {p, dp};
}

Dual eval_node(const Node& n, double x) {
  switch (n.kind) {
    case Kind::constant: return {n.value, 0.0};
    case Kind::variable: return {x, 1.0};
    case Kind::parameter: return {n.value, 0.0};
    case Kind::neg: {
      const Dual a = eval_node(*n.lhs, x);
      return {-a.v, -a.d};
    }
    case Kind::pow: return ipow(eval_node(*n.lhs, x), n.exponent);
    case Kind::call: {
      const Dual a = eval_node(*n.lhs, x);
      switch (n.func) {
        case Func::exp: {
          const double e = std::exp(a.v);
          return {e, e * a.d};
        }
        case Func::ln:
          if (!(a.v > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
          return {std::log(a.v), a.d / a.v};
        case Func::sin: return {std::sin(a.v), std::cos(a.v) * a.d};
        case Func::cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
        case Func::sqrt: {
          if (a.v < 0.0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
          const double s = std::sqrt(a.v);
          return {s, a.d / (2.0 * s)};
        }
        case Func::arctan: return {std::atan(a.v), a.d / (1.0 + a.v * a.v)};
      }
      break;
    }
    default: break;
  }
  const Dual a = eval_node(*n.lhs, x);
  const Dual b = eval_node(*n.rhs, x);
  switch (n.kind) {
    case Kind::add: return {a.v + b.v, a.d + b.d};
    case Kind::sub: return {a.v - b.v, a.d - b.d};
    case Kind::mul: return {a.v * b.v, a.d * b.v + a.v * b.d};
    case Kind::div: return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    default: break;
  }
  throw InternalConsistencyError("unknown expression node");
}

}  // namespace

Expression Expression::parse(std::string_view text, const Parameters& params) {
  for (const auto& [name, v] : params) {
    if (name == "x") throw InvalidInput("'x' is the variable and cannot be a parameter");
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) throw InvalidInput("parameter name '" + name + "' is a function name");
    }
  }
  return Expression(Parser(text, params).parse());
}

std::string Expression::unparse() const {
  std::string out;
  unparse_into(*root_, out);
  return out;
}

double Expression::eval(double x) const { return eval_node(*root_, x).v; }

Dual Expression::eval_dual(double x) const { return eval_node(*root_, x); }

ScalarFunction Expression::to_function(std::string name, Interval domain) const {
  const NodePtr root = root_;
  const std::string label = name;
  auto checked = [root, label](double x) {
    const Dual d = eval_node(*root, x);
    if (!std::isfinite(d.v) || !std::isfinite(d.d)) {
      throw SingularityError(label, x, "coefficient '" + label + "' is not finite at x = " +
                                           format_number(x));
    }
    return d;
  };
  if (root->kind == Kind::constant || root->kind == Kind::parameter) {
    return ScalarFunction::constant(root->value, std::move(name));
  }
  return ScalarFunction(
      std::move(name), [checked](double x) { return checked(x).v; },
      [checked](double x) { return checked(x).d; }, {}, domain);
}

}  // namespace abelkit::expr
