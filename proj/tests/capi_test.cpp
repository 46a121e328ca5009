#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "abelkit/abelkit.h"

using Json = nlohmann::json;

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { abk_string_free(s); }
  Json json() const { return Json::parse(s); }
};

Json last_error() { return Json::parse(abk_last_error_json()); }

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(abk_status_name(ABK_OK)) == "ok");
  CHECK(std::string(abk_status_name(ABK_PARSE)) == "parse");
  CHECK(std::string(abk_status_name(ABK_BLOW_UP)) == "blow_up");
  CHECK(std::string(abk_version()).size() > 0);
  abk_string_free(nullptr);
  abk_params_free(nullptr);
  abk_expr_free(nullptr);
  abk_equation_free(nullptr);
}

TEST_CASE("expressions") {
  abk_params* p = abk_params_new();
  REQUIRE(p);
  CHECK(abk_params_set(p, "a", 1.0) == ABK_OK);
  CHECK(abk_params_set(p, "b", -2.0) == ABK_OK);
  CHECK(abk_params_set(p, nullptr, 1.0) == ABK_INVALID_INPUT);

  abk_expr* e = nullptr;
  REQUIRE(abk_expr_parse("3*(a*x+b^2)/(b*x+a^2)", p, &e) == ABK_OK);
  double v = 0, d = 0;
  CHECK(abk_expr_eval(e, 0.0, &v, &d) == ABK_OK);
  CHECK(v == doctest::Approx(12.0));
  CHECK(abk_expr_eval(e, 0.0, &v, nullptr) == ABK_OK);
  Owned text;
  CHECK(abk_expr_unparse(e, &text.s) == ABK_OK);
  abk_expr* again = nullptr;
  REQUIRE(abk_expr_parse(text.s, p, &again) == ABK_OK);
  double v2 = 0;
  abk_expr_eval(again, 1.7, &v2, nullptr);
  abk_expr_eval(e, 1.7, &v, nullptr);
  CHECK(v == v2);
  abk_expr_free(again);
  abk_expr_free(e);

  abk_expr* bad = nullptr;
  CHECK(abk_expr_parse("3*(x+", p, &bad) == ABK_PARSE);
  CHECK(bad == nullptr);
  const Json err = last_error();
  CHECK(err["code"] == "parse");
  CHECK(err["offset"] == 5);
  CHECK(err["expected"].is_array());
  CHECK(std::string(abk_last_error_message()).size() > 0);

  CHECK(abk_expr_parse("c*x", p, &bad) == ABK_PARSE);
  CHECK(abk_expr_parse("x", nullptr, &bad) == ABK_OK);
  abk_expr_free(bad);
  abk_params_free(p);
}

TEST_CASE("equations and residual") {
  abk_equation* eq = nullptr;
  REQUIRE(abk_equation_vein(1.0, -2.0, 0.6, 4.0, &eq) == ABK_OK);
  double r = 1;
  CHECK(abk_equation_rhs(eq, 2.0, 0.0, &r) == ABK_OK);
  CHECK(r == 0.0);
  CHECK(abk_equation_rhs(eq, 0.5, 1.0, &r) == ABK_INVALID_INPUT);
  CHECK(last_error()["code"] == "invalid_input");

  Owned report;
  CHECK(abk_analyze(eq, 21, 1, &report.s) == ABK_OK);
  for (const auto& s : report.json()["normal_form_invariant"]["samples"]) {
    CHECK(std::abs(s["value"].get<double>() + 1.0) < 1e-8);
  }
  abk_equation_free(eq);

  // dy/dx = y^3 through y(0) = 1
  abk_expr *zero = nullptr, *one = nullptr;
  abk_expr_parse("0", nullptr, &zero);
  abk_expr_parse("1", nullptr, &one);
  REQUIRE(abk_equation_new(zero, zero, zero, one, -1.05, 0.45, &eq) == ABK_OK);
  std::vector<double> xs, ys;
  for (int i = 0; i <= 1000; ++i) {
    xs.push_back(-1.0 + 1.4 * i / 1000);
    ys.push_back(1 / std::sqrt(1 - 2 * xs.back()));
  }
  CHECK(abk_equation_residual(eq, xs.data(), ys.data(), xs.size(), &r) == ABK_OK);
  CHECK(r < 1e-6);
  CHECK(abk_equation_residual(eq, xs.data(), ys.data(), 3, &r) == ABK_INVALID_INPUT);
  abk_equation_free(eq);
  CHECK(abk_equation_new(zero, zero, zero, one, 1.0, 0.0, &eq) == ABK_INVALID_INPUT);

  // a coefficient with a pole inside the domain
  abk_expr* inv = nullptr;
  REQUIRE(abk_expr_parse("1/x", nullptr, &inv) == ABK_OK);
  REQUIRE(abk_equation_new(zero, zero, zero, inv, -1.0, 1.0, &eq) == ABK_OK);
  CHECK(abk_equation_rhs(eq, 0.0, 1.0, &r) == ABK_SINGULARITY);
  const Json err = last_error();
  CHECK(err["code"] == "singularity");
  CHECK(err["where"] == 0.0);
  abk_equation_free(eq);
  abk_expr_free(inv);
  abk_expr_free(zero);
  abk_expr_free(one);
}

TEST_CASE("null arguments") {
  CHECK(abk_expr_parse(nullptr, nullptr, nullptr) == ABK_INVALID_INPUT);
  CHECK(abk_equation_rhs(nullptr, 0, 0, nullptr) == ABK_INVALID_INPUT);
  CHECK(abk_phi_table(-1, 1, 11, ABK_CSV, nullptr) == ABK_INVALID_INPUT);
}

TEST_CASE("tables") {
  Owned csv, json;
  REQUIRE(abk_phi_table(-3, 3, 601, ABK_CSV, &csv.s) == ABK_OK);
  const std::string text = csv.s;
  CHECK(text.rfind("x,phi1,phi2,phi3\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 602);
  REQUIRE(abk_phi_table(-3, 3, 601, ABK_JSON, &json.s) == ABK_OK);
  CHECK(json.json()["rows"].size() == 601);
  Owned none;
  CHECK(abk_phi_table(1, 1, 10, ABK_CSV, &none.s) == ABK_INVALID_INPUT);
  CHECK(none.s == nullptr);
}

TEST_CASE("constant-coefficient solve") {
  abk_solve_const_options o;
  abk_solve_const_options_init(&o);
  o.A[0] = 0;
  o.A[1] = 2;
  o.A[2] = -3;
  o.A[3] = 1;
  o.samples = 2001;
  Owned curve, summary;
  REQUIRE(abk_solve_const(&o, ABK_CSV, &curve.s, &summary.s) == ABK_OK);
  const Json s = summary.json();
  CHECK(s["root_case"] == "three_distinct_real");
  CHECK(s["max_residual"].get<double>() < 1e-6);
  o.A[3] = 0;
  Owned c2, s2;
  CHECK(abk_solve_const(&o, ABK_CSV, &c2.s, &s2.s) == ABK_PRECONDITION);
  CHECK(c2.s == nullptr);
  CHECK(s2.s == nullptr);
}

TEST_CASE("vein") {
  abk_vein_solve_options o;
  abk_vein_solve_options_init(&o);
  CHECK(o.a == 1.0);
  CHECK(o.b == -2.0);
  for (int family = 1; family <= 3; ++family) {
    o.family = family;
    Owned curve, summary;
    REQUIRE(abk_vein_solve(&o, ABK_CSV, &curve.s, &summary.s) == ABK_OK);
    CHECK(summary.json()["passed"].get<bool>());
  }
  o.family = 4;
  Owned c, s;
  CHECK(abk_vein_solve(&o, ABK_CSV, &c.s, &s.s) == ABK_INVALID_INPUT);
  o.family = 1;
  o.branch = 999;
  CHECK(abk_vein_solve(&o, ABK_CSV, &c.s, &s.s) == ABK_INVALID_INPUT);

  Owned check;
  int all = 0;
  REQUIRE(abk_vein_check(1.0, -2.0, 1.0, -5, 5, 1e-6, &check.s, &all) == ABK_OK);
  CHECK(all == 1);
  CHECK(check.json()["all_passed"].get<bool>());
}

TEST_CASE("portrait") {
  abk_portrait_options o;
  abk_portrait_options_init(&o);
  o.a = 1;
  o.b = -2;
  o.grid_x = 2;
  o.grid_v = 2;
  Owned t, i, c, f;
  REQUIRE(abk_oscillator_portrait(&o, ABK_CSV, &t.s, &i.s, &c.s, &f.s) == ABK_OK);
  CHECK(std::string(t.s).rfind("seed_id,zeta,x,v\n", 0) == 0);
  CHECK(std::string(i.s).rfind("kind,x,v\n", 0) == 0);
  CHECK(std::string(c.s).rfind("x,h2,h3\n", 0) == 0);
  const Json fp = f.json();
  CHECK(fp["fixed_points"][0]["location"]["re"] == -1.0);
  CHECK(fp["fixed_points"][0]["location"]["im"] == 0.0);
  CHECK(fp["fixed_points"][0]["classification"] == "stable spiral");

  o.has_x_window = 1;
  o.x_min = 0;
  o.x_max = 1;
  Owned t2, i2, c2, f2;
  CHECK(abk_oscillator_portrait(&o, ABK_CSV, &t2.s, &i2.s, &c2.s, &f2.s) == ABK_INVALID_INPUT);
  CHECK(t2.s == nullptr);
  CHECK(f2.s == nullptr);
}
