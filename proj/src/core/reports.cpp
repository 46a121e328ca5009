#include "abelkit/reports.hpp"

#include <algorithm>
#include <cmath>

#include "abelkit/abel.hpp"
#include "abelkit/errors.hpp"
#include "abelkit/hyperbolic3.hpp"
#include "abelkit/integrability.hpp"

namespace abelkit::reports {

namespace {

Json error_json(const std::exception& e) {
  Json j;
  const auto* err = dynamic_cast<const Error*>(&e);
  j["code"] = err ? to_string(err->code()) : "internal";
  j["message"] = e.what();
  return j;
}

Json interval_json(const Interval& w) {
  return {{"lo", json_number(w.lo)}, {"hi", json_number(w.hi)}};
}

Json complex_json(oscillator::cplx z) {
  return {{"re", json_number(z.real())}, {"im", json_number(z.imag())}};
}

Json check_json(const std::string& name, bool passed, double value, double tol,
                const std::string& relation) {
  return {{"name", name},
          {"passed", passed},
          {"value", json_number(value)},
          {"tolerance", json_number(tol)},
          {"relation", relation}};
}

std::vector<double> samples_for(Interval w, double step, std::optional<std::size_t> samples) {
  std::size_t n = 0;
  if (samples) {
    n = *samples;
  } else {
    if (!(step > 0.0)) throw InvalidInput("step must be positive");
    n = static_cast<std::size_t>(std::llround((w.hi - w.lo) / step)) + 1;
  }
  if (n < 2) throw InvalidInput("sample count must be at least 2");
  return linspace(w.lo, w.hi, n);
}

void require_window(const Interval& w, const char* what) {
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || !(w.lo < w.hi)) {
    throw InvalidInput(std::string(what) + ": window must be finite with lo < hi");
  }
}

}  // namespace

Table phi_table(Interval window, std::size_t samples) {
  require_window(window, "phi");
  if (samples < 2) throw InvalidInput("phi: sample count must be at least 2");
  Table t{{"x", "phi1", "phi2", "phi3"}, {}};
  for (double x : linspace(window.lo, window.hi, samples)) {
    const auto p = hyperbolic3::phi(x);
    t.add({x, static_cast<double>(p.phi1), static_cast<double>(p.phi2),
           static_cast<double>(p.phi3)});
  }
  return t;
}

CurveReport solve_const(const SolveConstOptions& opt) {
  require_window(opt.window, "solve-const");
  if (opt.samples < 2) throw InvalidInput("solve-const: sample count must be at least 2");
  const auto probe = solve_constant_coeffs(opt.A, opt.x0, opt.y0, {});
  double lo = opt.window.lo;
  double hi = opt.window.hi;
  std::vector<double> xs;
  for (double x : linspace(lo, hi, opt.samples)) {
    if (probe.blow_up_forward && x >= *probe.blow_up_forward) continue;
    if (probe.blow_up_backward && x <= *probe.blow_up_backward) continue;
    xs.push_back(x);
  }
  const auto sol = solve_constant_coeffs(opt.A, opt.x0, opt.y0, xs);

  CurveReport out;
  out.curve = Table{{"x", "y"}, {}};
  for (const auto& p : sol.curve.points()) out.curve.add({p.x, p.y});

  Json& s = out.summary;
  s["coefficients"] = {opt.A[0], opt.A[1], opt.A[2], opt.A[3]};
  s["x0"] = opt.x0;
  s["y0"] = opt.y0;
  s["root_case"] = to_string(sol.roots.kind);
  s["real_roots"] = sol.roots.real;
  if (sol.roots.kind == RootCase::real_and_complex_pair) {
    s["complex_pair"] = {{"re", sol.roots.alpha}, {"im", sol.roots.beta}};
  } else {
    s["complex_pair"] = nullptr;
  }
  s["equilibrium"] = sol.equilibrium ? json_number(*sol.equilibrium) : Json(nullptr);
  s["branch"] = interval_json({sol.branch_lo, sol.branch_hi});
  s["blow_up_forward"] = sol.blow_up_forward ? json_number(*sol.blow_up_forward) : Json(nullptr);
  s["blow_up_backward"] =
      sol.blow_up_backward ? json_number(*sol.blow_up_backward) : Json(nullptr);
  s["points"] = sol.curve.size();
  if (sol.curve.size() >= 5) {
    const auto eq = AbelFirstKind::constant(opt.A[0], opt.A[1], opt.A[2], opt.A[3]);
    s["max_residual"] = json_number(residual(eq, sol.curve));
  } else {
    s["max_residual"] = nullptr;
  }
  return out;
}

std::optional<std::size_t> longest_branch(const vein::BranchTable& table) {
  std::optional<std::size_t> best;
  double best_len = -1.0;
  for (std::size_t i = 0; i < table.branches.size(); ++i) {
    const auto w = vein::solve_window(table, i);
    if (w && w->hi - w->lo > best_len) {
      best = i;
      best_len = w->hi - w->lo;
    }
  }
  return best;
}

CurveReport vein_solve(const VeinSolveOptions& opt) {
  if (opt.family < 1 || opt.family > 3) throw InvalidInput("family must be 1, 2 or 3");
  if (!(opt.tol > 0.0)) throw InvalidInput("tolerance must be positive");
  const auto eq = vein::vein_equation(opt.params);
  const auto table = vein::branch_table(opt.params, opt.s_min, opt.s_max, opt.family);
  std::size_t branch = 0;
  if (opt.branch) {
    if (*opt.branch >= table.branches.size()) {
      throw InvalidInput("branch " + std::to_string(*opt.branch) + " does not exist; the table has " +
                         std::to_string(table.branches.size()));
    }
    branch = *opt.branch;
  } else {
    const auto best = longest_branch(table);
    if (!best) throw PreconditionError("no branch has a usable window on [s_min, s_max]");
    branch = *best;
  }
  Interval w{};
  if (opt.window) {
    w = *opt.window;
    require_window(w, "vein solve");
  } else {
    const auto sw = vein::solve_window(table, branch);
    if (!sw) throw PreconditionError("branch " + std::to_string(branch) + " has no usable window");
    w = *sw;
  }
  const auto xs = samples_for(w, opt.step, opt.samples);
  const SampledCurve curve = vein::solve(table, branch, xs);
  const auto local = eq.on(w.lo - 1e-9, w.hi + 1e-9);
  std::vector<double> res;
  if (curve.size() >= 5) res = residuals(local.equation, curve);

  CurveReport out;
  out.curve = Table{{"x", "y", "residual"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double r = res.empty() ? std::nan("") : res[i];
    if (!res.empty()) worst = std::max(worst, r);
    out.curve.add({curve[i].x, curve[i].y, r});
  }

  Json& s = out.summary;
  s["a"] = opt.params.a;
  s["b"] = opt.params.b;
  s["c"] = opt.params.c;
  s["family"] = opt.family;
  s["branch"] = branch;
  Json branches = Json::array();
  for (const auto& br : table.branches) {
    branches.push_back({{"s_lo", br.s_lo},
                        {"s_hi", br.s_hi},
                        {"lo_kind", vein::to_string(br.lo_kind)},
                        {"hi_kind", vein::to_string(br.hi_kind)},
                        {"x_at_lo", json_number(br.x_at_lo)},
                        {"x_at_hi", json_number(br.x_at_hi)},
                        {"increasing", br.increasing}});
  }
  s["branches"] = std::move(branches);
  s["window"] = interval_json(w);
  s["points"] = curve.size();
  s["max_residual"] = res.empty() ? Json(nullptr) : json_number(worst);
  s["tolerance"] = opt.tol;
  s["passed"] = !res.empty() && worst < opt.tol;
  return out;
}

std::vector<InvariantSample> vein_invariant_samples(const vein::VeinParams& params,
                                                    std::size_t count) {
  const double a = params.a;
  const double b = params.b;
  const double centre = a + b;
  const auto eq = vein::vein_equation(params);
  const auto pieces = vein::pole_free_intervals(params, centre - 6.0, centre + 6.0, 0.01);
  auto clear = [&](double x) {
    return std::abs(b * x + a * a) >= 0.1 && std::abs(x - centre) >= 0.01 &&
           (a != b || std::abs(x + a) >= 0.01);
  };

  // normal forms are built per pole-free piece, lazily
  std::vector<std::optional<NormalForm>> forms(pieces.size());
  std::vector<InvariantSample> out;
  for (std::size_t m = count; out.size() < count && m <= 64 * count; m *= 2) {
    out.clear();
    std::vector<double> cand;
    const auto line = linspace(centre - 6.0, centre + 6.0, m + 2);
    for (std::size_t i = 1; i + 1 < line.size(); ++i) {
      if (clear(line[i])) cand.push_back(line[i]);
    }
    if (cand.size() < count) continue;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t idx = count == 1 ? 0 : i * (cand.size() - 1) / (count - 1);
      const double x = cand[idx];
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (!pieces[p].contains(x)) continue;
        if (!forms[p]) forms[p] = vein::vein_normal_form(eq.on(pieces[p].lo, pieces[p].hi));
        out.push_back({x, forms[p]->invariant(x)});
        break;
      }
    }
  }
  if (out.size() < count) {
    throw PreconditionError("could not place " + std::to_string(count) +
                            " invariant samples clear of the singular points");
  }
  return out;
}

Json vein_check(const VeinCheckOptions& opt) {
  const vein::VeinParams& p = opt.params;
  const auto eq = vein::vein_equation(p);
  Json checks = Json::array();
  bool all = true;
  auto add = [&](Json c) {
    all = all && c["passed"].get<bool>();
    checks.push_back(std::move(c));
  };
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      Json c = check_json(name, false, std::nan(""), 0.0, "error");
      c["error"] = error_json(e);
      add(std::move(c));
    }
  };

  guarded("determinant_form", [&] {
    double worst = 0.0;
    for (double x : linspace(p.a + p.b - 4.0, p.a + p.b + 4.0, 97)) {
      if (eq.pole && std::abs(x - *eq.pole) < 1e-3) continue;
      const auto r = eq.rational_coefficients(x);
      const auto d = eq.determinant_coefficients(x);
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(r[i] - d[i]) / std::max(1.0, std::abs(r[i])));
      }
    }
    add(check_json("determinant_form", worst <= 1e-12, worst, 1e-12, "max relative difference"));
  });

  guarded("invariant", [&] {
    double worst = 0.0;
    for (const auto& s : vein_invariant_samples(p, 100)) {
      worst = std::max(worst, std::abs(s.invariant + 1.0));
    }
    add(check_json("invariant", worst < 1e-8, worst, 1e-8, "max |I + 1|"));
  });

  guarded("triad", [&] {
    double worst = 0.0;
    for (double x : linspace(-8.0, 8.0, 1000)) {
      const auto t = hyperbolic3::phi(x);
      worst = std::max(worst, static_cast<double>(std::abs(t.cubic_form() - 1.0L)));
      worst = std::max(worst, static_cast<double>(std::abs(hyperbolic3::wronskian(x) - 1.0L)));
    }
    add(check_json("triad", worst < 1e-10, worst, 1e-10, "max identity deviation"));
  });

  for (int family = 1; family <= 3; ++family) {
    const std::string name = "family_" + std::to_string(family) + "_residual";
    guarded(name, [&] {
      VeinSolveOptions so;
      so.params = p;
      so.family = family;
      so.s_min = opt.s_min;
      so.s_max = opt.s_max;
      so.tol = opt.tol;
      const auto r = vein_solve(so);
      const double worst = r.summary["max_residual"].is_null()
                               ? std::nan("")
                               : r.summary["max_residual"].get<double>();
      Json c = check_json(name, r.summary["passed"].get<bool>(), worst, opt.tol, "max residual");
      c["branch"] = r.summary["branch"];
      c["window"] = r.summary["window"];
      add(std::move(c));
    });
  }

  if (p.a != p.b) {
    guarded("rejected_candidate", [&] {
      // next to the real root of the cubic, where the candidate is large
      std::optional<Interval> w;
      for (const Interval& iv : vein::pole_free_intervals(p, p.a + p.b - 1.5, p.a + p.b + 1.5, 0.1)) {
        if (!w || iv.hi - iv.lo > w->hi - w->lo) w = iv;
      }
      const auto xs = linspace(w->lo, w->hi, 201);
      const auto curve = vein::rejected_candidate(p, xs);
      const double r = residual(eq.on(w->lo - 1e-9, w->hi + 1e-9).equation, curve);
      add(check_json("rejected_candidate", r > 0.1, r, 0.1, "max residual must exceed"));
    });
  }

  guarded("fixed_point", [&] {
    const auto fp = oscillator::classify_real(p.a, p.b);
    const bool ok = fp.classification == oscillator::Classification::stable_spiral;
    Json c = check_json("fixed_point", ok, fp.location.real(), 0.0, "stable spiral at a+b");
    c["classification"] = oscillator::to_string(fp.classification);
    add(std::move(c));
  });

  Json out;
  out["a"] = p.a;
  out["b"] = p.b;
  out["c"] = p.c;
  out["checks"] = std::move(checks);
  out["all_passed"] = all;
  return out;
}

Json fixed_points_json(double a, double b, const std::vector<oscillator::FixedPointReport>& fps) {
  Json list = Json::array();
  for (const auto& f : fps) {
    list.push_back({{"location", complex_json(f.location)},
                    {"v", 0.0},
                    {"delta1", complex_json(f.delta1)},
                    {"delta2", complex_json(f.delta2)},
                    {"discriminant", complex_json(f.discriminant)},
                    {"classification", oscillator::to_string(f.classification)},
                    {"eigenvalues", {complex_json(f.eigenvalues[0]), complex_json(f.eigenvalues[1])}},
                    {"collapsed", f.collapsed}});
  }
  Json out;
  out["a"] = a;
  out["b"] = b;
  out["fixed_points"] = std::move(list);
  return out;
}

PortraitReport portrait(double a, double b, std::optional<Interval> x_window,
                        std::optional<Interval> v_window, const oscillator::PortraitOptions& opt) {
  const auto osc = oscillator::build(a, b);
  const auto def = oscillator::default_window(a, b);
  const Interval xw = x_window.value_or(def.first);
  const Interval vw = v_window.value_or(def.second);
  const auto data = oscillator::portrait_data(osc, xw, vw, opt);

  PortraitReport out;
  out.trajectories = Table{{"seed_id", "zeta", "x", "v"}, {}};
  for (const auto& t : data.trajectories) {
    for (const auto& q : t.points) {
      out.trajectories.add({static_cast<long long>(t.seed_id), q.zeta, q.x, q.v});
    }
  }
  out.isoclines = Table{{"kind", "x", "v"}, {}};
  for (const auto& p : data.isoclines) out.isoclines.add({p.kind, p.x, p.v});
  out.coefficients = Table{{"x", "h2", "h3"}, {}};
  for (const auto& c : data.coefficients) out.coefficients.add({c.x, c.h2, c.h3});

  out.fixed_points = fixed_points_json(a, b, data.fixed_points);
  out.fixed_points["x_window"] = interval_json(xw);
  out.fixed_points["v_window"] = interval_json(vw);
  Json seeds = Json::array();
  for (const auto& t : data.trajectories) {
    seeds.push_back({{"seed_id", t.seed_id},
                     {"x0", t.x0},
                     {"v0", t.v0},
                     {"forward", oscillator::to_string(t.forward_reason)},
                     {"backward", oscillator::to_string(t.backward_reason)}});
  }
  out.fixed_points["seeds"] = std::move(seeds);
  return out;
}

Json analyze(const AnalyzeOptions& opt) {
  require_window(opt.window, "analyze");
  if (opt.samples < 2) throw InvalidInput("analyze: sample count must be at least 2");
  auto [f0, f1, f2, f3] = opt.f;
  const AbelFirstKind eq = AbelFirstKind::make(f0, f1, f2, f3, opt.window);
  const auto grid = eq.grid(opt.samples);

  Json out;
  out["coefficients"] = {{"f0", opt.text[0]}, {"f1", opt.text[1]}, {"f2", opt.text[2]},
                         {"f3", opt.text[3]}};
  out["window"] = interval_json(opt.window);
  out["anchor"] = eq.domain.anchor;

  Json nf_json;
  bool null_invariant = false;
  try {
    NormalForm nf = to_normal_form(eq);
    double raw_max = 0.0;
    for (double x : grid) raw_max = std::max(raw_max, std::abs(nf.invariant(x)));
    null_invariant = raw_max < 1e-8;
    if (opt.unit_normalize) nf = unit_normalized(nf);
    nf_json["normalization"] = opt.unit_normalize ? "unit" : "anchor";
    nf_json["omega_at_anchor"] = json_number(nf.omega_at_anchor);
    Json samples = Json::array();
    double lo = INFINITY, hi = -INFINITY;
    for (double x : grid) {
      const double v = nf.invariant(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      samples.push_back({{"x", x}, {"value", json_number(v)}});
    }
    nf_json["samples"] = std::move(samples);
    nf_json["spread"] = json_number(hi - lo);
  } catch (const Error& e) {
    nf_json["error"] = error_json(e);
  }
  out["normal_form_invariant"] = std::move(nf_json);
  out["null_invariant"] = null_invariant;

  Json ap_json;
  try {
    const CanonicalForm cf = to_canonical_form(eq);
    Json samples = Json::array();
    double lo = INFINITY, hi = -INFINITY;
    for (double x : grid) {
      const double g = cf.appell(x);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
      samples.push_back({{"x", x}, {"value", json_number(g)}});
    }
    ap_json["samples"] = std::move(samples);
    ap_json["constant"] = (hi - lo) <= 1e-8 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  } catch (const Error& e) {
    ap_json["error"] = error_json(e);
  }
  out["appell_invariant"] = std::move(ap_json);

  Json if_json;
  try {
    const auto cert = integrating_factor_check(eq);
    if_json["applicable"] = true;
    if_json["k"] = cert ? json_number(cert->k) : Json(nullptr);
  } catch (const PreconditionError& e) {
    if_json["applicable"] = false;
    if_json["k"] = nullptr;
    if_json["reason"] = e.what();
  }
  out["integrating_factor"] = std::move(if_json);
  return out;
}

}  // namespace abelkit::reports
