#include "abelkit/abelkit.h"

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "abelkit/abel.hpp"
#include "abelkit/acceptance.hpp"
#include "abelkit/errors.hpp"
#include "abelkit/expression.hpp"
#include "abelkit/format.hpp"
#include "abelkit/reports.hpp"
#include "abelkit/vein.hpp"

struct abk_params {
  abelkit::expr::Parameters values;
};

struct abk_expr {
  abelkit::expr::Expression e;
};

struct abk_equation {
  abelkit::AbelFirstKind eq;
  std::array<std::string, 4> text;
};

namespace {

using abelkit::reports::Json;

thread_local std::string g_message;
thread_local std::string g_json = "null";

abk_status status_of(abelkit::ErrorCode c) {
  return static_cast<abk_status>(static_cast<int>(c));
}

void set_error(abk_status status, const std::string& message, Json extra = Json::object()) {
  Json j;
  j["code"] = abk_status_name(status);
  j["message"] = message;
  for (auto& [k, v] : extra.items()) j[k] = v;
  g_message = message;
  g_json = j.dump();
}

/// Runs body, mapping exceptions onto status codes and the thread's last error.
template <class F>
abk_status guarded(F&& body) {
  using namespace abelkit;
  try {
    body();
    return ABK_OK;
  } catch (const ParseError& e) {
    set_error(ABK_PARSE, e.what(), {{"offset", e.offset()}, {"expected", e.expected()}});
    return ABK_PARSE;
  } catch (const BlowUpError& e) {
    set_error(ABK_BLOW_UP, e.what(), {{"critical", json_number(e.critical())}});
    return ABK_BLOW_UP;
  } catch (const SingularityError& e) {
    set_error(ABK_SINGULARITY, e.what(),
              {{"coefficient", e.coefficient()}, {"where", json_number(e.where())}});
    return ABK_SINGULARITY;
  } catch (const OutOfRangeError& e) {
    set_error(ABK_OUT_OF_RANGE, e.what(), {{"admissible", e.admissible()}});
    return ABK_OUT_OF_RANGE;
  } catch (const Error& e) {
    const abk_status s = status_of(e.code());
    set_error(s, e.what());
    return s;
  } catch (const std::bad_alloc&) {
    set_error(ABK_INTERNAL, "out of memory");
    return ABK_INTERNAL;
  } catch (const std::exception& e) {
    set_error(ABK_INTERNAL, e.what());
    return ABK_INTERNAL;
  } catch (...) {
    set_error(ABK_INTERNAL, "unknown failure");
    return ABK_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw abelkit::InvalidInput(std::string(what) + " must not be NULL");
}

std::string render(const abelkit::Table& t, abk_format f) {
  if (f == ABK_JSON) return t.to_json().dump() + "\n";
  if (f != ABK_CSV) throw abelkit::InvalidInput("unknown output format");
  return t.to_csv();
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

/// Assigns all outputs only once every string exists, so a failure leaves
/// the caller's pointers untouched.
struct Outputs {
  std::vector<std::pair<char**, std::string>> items;
  void add(char** where, std::string s) {
    require(where, "output pointer");
    items.emplace_back(where, std::move(s));
  }
  void commit() {
    std::vector<char*> made;
    try {
      for (auto& [where, s] : items) made.push_back(dup(s));
    } catch (...) {
      for (char* m : made) std::free(m);
      throw;
    }
    for (std::size_t i = 0; i < items.size(); ++i) *items[i].first = made[i];
  }
};

}  // namespace

extern "C" {

const char* abk_version(void) { return "0.1.0"; }

const char* abk_status_name(abk_status status) {
  switch (status) {
    case ABK_OK: return "ok";
    case ABK_INTERNAL: return "internal";
    default:
      if (status >= ABK_INVALID_INPUT && status <= ABK_IO) {
        return abelkit::to_string(static_cast<abelkit::ErrorCode>(status));
      }
      return "unknown";
  }
}

const char* abk_last_error_message(void) { return g_message.c_str(); }
const char* abk_last_error_json(void) { return g_json.c_str(); }
void abk_string_free(char* s) { std::free(s); }

abk_params* abk_params_new(void) { return new (std::nothrow) abk_params{}; }
void abk_params_free(abk_params* p) { delete p; }

abk_status abk_params_set(abk_params* p, const char* name, double value) {
  return guarded([&] {
    require(p, "params");
    require(name, "name");
    if (!std::isfinite(value)) {
      throw abelkit::InvalidInput(std::string("parameter '") + name + "' must be finite");
    }
    p->values[name] = value;
  });
}

abk_status abk_expr_parse(const char* text, const abk_params* params, abk_expr** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    static const abelkit::expr::Parameters none;
    auto e = abelkit::expr::Expression::parse(text, params ? params->values : none);
    *out = new abk_expr{std::move(e)};
  });
}

void abk_expr_free(abk_expr* e) { delete e; }

abk_status abk_expr_eval(const abk_expr* e, double x, double* value, double* derivative) {
  return guarded([&] {
    require(e, "expression");
    require(value, "value");
    const auto d = e->e.eval_dual(x);
    *value = d.v;
    if (derivative) *derivative = d.d;
  });
}

abk_status abk_expr_unparse(const abk_expr* e, char** out) {
  return guarded([&] {
    require(e, "expression");
    require(out, "out");
    *out = dup(e->e.unparse());
  });
}

abk_status abk_equation_new(const abk_expr* f0, const abk_expr* f1, const abk_expr* f2,
                            const abk_expr* f3, double x_min, double x_max, abk_equation** out) {
  return guarded([&] {
    const abk_expr* f[4] = {f0, f1, f2, f3};
    for (const abk_expr* e : f) require(e, "coefficient");
    require(out, "out");
    const abelkit::Interval w{x_min, x_max};
    auto eq = abelkit::AbelFirstKind::make(f0->e.to_function("f0", w), f1->e.to_function("f1", w),
                                           f2->e.to_function("f2", w), f3->e.to_function("f3", w),
                                           w);
    *out = new abk_equation{std::move(eq),
                            {f0->e.unparse(), f1->e.unparse(), f2->e.unparse(), f3->e.unparse()}};
  });
}

abk_status abk_equation_vein(double a, double b, double x_min, double x_max, abk_equation** out) {
  return guarded([&] {
    require(out, "out");
    const auto v = abelkit::vein::vein_equation({a, b, 1.0}, {x_min, x_max});
    const std::string A = "(" + abelkit::format_number(a) + ")";
    const std::string B = "(" + abelkit::format_number(b) + ")";
    const std::string D = "(" + B + "*x+" + A + "^2)";
    *out = new abk_equation{
        v.equation,
        {"0", "-2*" + B + "/" + D, "3*(" + A + "*x+" + B + "^2)/" + D,
         "(x^3-3*" + A + "*" + B + "*x-" + A + "^3-" + B + "^3)/" + D}};
  });
}

void abk_equation_free(abk_equation* eq) { delete eq; }

abk_status abk_equation_rhs(const abk_equation* eq, double x, double y, double* out) {
  return guarded([&] {
    require(eq, "equation");
    require(out, "out");
    *out = abelkit::rhs(eq->eq, x, y);
  });
}

abk_status abk_equation_residual(const abk_equation* eq, const double* xs, const double* ys,
                                 size_t n, double* out) {
  return guarded([&] {
    require(eq, "equation");
    require(xs, "xs");
    require(ys, "ys");
    require(out, "out");
    if (n < 5) throw abelkit::InvalidInput("residual needs at least 5 samples");
    std::vector<abelkit::CurvePoint> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back({xs[i], ys[i]});
    *out = abelkit::residual(eq->eq, abelkit::SampledCurve(std::move(pts)));
  });
}

abk_status abk_analyze(const abk_equation* eq, size_t samples, int unit_normalize, char** json) {
  return guarded([&] {
    require(eq, "equation");
    abelkit::reports::AnalyzeOptions opt;
    opt.f = {eq->eq.f0, eq->eq.f1, eq->eq.f2, eq->eq.f3};
    opt.text = eq->text;
    opt.window = eq->eq.domain.interval;
    opt.samples = samples;
    opt.unit_normalize = unit_normalize != 0;
    Outputs o;
    o.add(json, render(abelkit::reports::analyze(opt)));
    o.commit();
  });
}

void abk_solve_const_options_init(abk_solve_const_options* opt) {
  if (!opt) return;
  *opt = {{0.0, 0.0, 0.0, 1.0}, 0.0, 0.5, -1.0, 1.0, 201};
}

abk_status abk_solve_const(const abk_solve_const_options* opt, abk_format format, char** curve,
                           char** summary_json) {
  return guarded([&] {
    require(opt, "options");
    abelkit::reports::SolveConstOptions so;
    so.A = {opt->A[0], opt->A[1], opt->A[2], opt->A[3]};
    so.x0 = opt->x0;
    so.y0 = opt->y0;
    so.window = {opt->x_min, opt->x_max};
    so.samples = opt->samples;
    const auto r = abelkit::reports::solve_const(so);
    Outputs o;
    o.add(curve, render(r.curve, format));
    o.add(summary_json, render(r.summary));
    o.commit();
  });
}

abk_status abk_phi_table(double x_min, double x_max, size_t samples, abk_format format,
                         char** out) {
  return guarded([&] {
    Outputs o;
    o.add(out, render(abelkit::reports::phi_table({x_min, x_max}, samples), format));
    o.commit();
  });
}

void abk_vein_solve_options_init(abk_vein_solve_options* opt) {
  if (!opt) return;
  *opt = {1.0, -2.0, 1.0, 1, -1, -5.0, 5.0, 0, 0.0, 0.0, 1e-3, 0, 1e-6};
}

abk_status abk_vein_solve(const abk_vein_solve_options* opt, abk_format format, char** curve,
                          char** summary_json) {
  return guarded([&] {
    require(opt, "options");
    abelkit::reports::VeinSolveOptions so;
    so.params = {opt->a, opt->b, opt->c};
    so.family = opt->family;
    if (opt->branch >= 0) so.branch = static_cast<std::size_t>(opt->branch);
    so.s_min = opt->s_min;
    so.s_max = opt->s_max;
    if (opt->has_window) so.window = abelkit::Interval{opt->x_min, opt->x_max};
    so.step = opt->step;
    if (opt->samples) so.samples = opt->samples;
    so.tol = opt->tol;
    const auto r = abelkit::reports::vein_solve(so);
    Outputs o;
    o.add(curve, render(r.curve, format));
    o.add(summary_json, render(r.summary));
    o.commit();
  });
}

abk_status abk_vein_check(double a, double b, double c, double s_min, double s_max, double tol,
                          char** json, int* all_passed) {
  return guarded([&] {
    abelkit::reports::VeinCheckOptions vo;
    vo.params = {a, b, c};
    vo.s_min = s_min;
    vo.s_max = s_max;
    vo.tol = tol;
    const Json j = abelkit::reports::vein_check(vo);
    Outputs o;
    o.add(json, render(j));
    o.commit();
    if (all_passed) *all_passed = j["all_passed"].get<bool>() ? 1 : 0;
  });
}

void abk_portrait_options_init(abk_portrait_options* opt) {
  if (!opt) return;
  const abelkit::oscillator::PortraitOptions d;
  *opt = {1.0, -2.0, 0, 0.0, 0.0, 0, 0.0, 0.0, d.grid_x, d.grid_v, d.zeta_max,
          d.samples_per_direction, d.curve_samples, d.threads};
}

abk_status abk_oscillator_portrait(const abk_portrait_options* opt, abk_format format,
                                   char** trajectories, char** isoclines, char** coefficients,
                                   char** fixed_points_json) {
  return guarded([&] {
    require(opt, "options");
    abelkit::oscillator::PortraitOptions po;
    po.grid_x = opt->grid_x;
    po.grid_v = opt->grid_v;
    po.zeta_max = opt->zeta_max;
    po.samples_per_direction = opt->samples_per_direction;
    po.curve_samples = opt->curve_samples;
    po.threads = opt->threads;
    std::optional<abelkit::Interval> xw, vw;
    if (opt->has_x_window) xw = abelkit::Interval{opt->x_min, opt->x_max};
    if (opt->has_v_window) vw = abelkit::Interval{opt->v_min, opt->v_max};
    const auto r = abelkit::reports::portrait(opt->a, opt->b, xw, vw, po);
    Outputs o;
    o.add(trajectories, render(r.trajectories, format));
    o.add(isoclines, render(r.isoclines, format));
    o.add(coefficients, render(r.coefficients, format));
    o.add(fixed_points_json, render(r.fixed_points));
    o.commit();
  });
}

abk_status abk_verify(unsigned threads, char** json, int* all_passed) {
  return guarded([&] {
    const auto results = abelkit::acceptance::run_all(threads);
    Json list = Json::array();
    bool all = true;
    for (const auto& r : results) {
      all = all && r.passed;
      list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    Json j;
    j["criteria"] = std::move(list);
    j["all_passed"] = all;
    Outputs o;
    o.add(json, render(j));
    o.commit();
    if (all_passed) *all_passed = all ? 1 : 0;
  });
}

}  // extern "C"
