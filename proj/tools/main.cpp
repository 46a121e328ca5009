// abelkit command-line front end. Links only the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <unistd.h>

#include "abelkit/abelkit.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// Failure that already carries the JSON error body and exit status.
struct Failure {
  int status;
  Json error;
};

[[noreturn]] void fail(abk_status s) {
  Json e = Json::parse(abk_last_error_json(), nullptr, false);
  if (e.is_discarded()) e = {{"code", abk_status_name(s)}, {"message", abk_last_error_message()}};
  throw Failure{static_cast<int>(s), std::move(e)};
}

[[noreturn]] void fail(abk_status s, const std::string& message) {
  throw Failure{static_cast<int>(s), {{"code", abk_status_name(s)}, {"message", message}}};
}

void check(abk_status s) {
  if (s != ABK_OK) fail(s);
}

/// Owning wrapper for strings returned through the C interface.
struct CStr {
  char* p = nullptr;
  CStr() = default;
  CStr(const CStr&) = delete;
  CStr& operator=(const CStr&) = delete;
  ~CStr() { abk_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

// --- settings: config file overlaid by flags ------------------------------------

enum class Kind { number, integer, text };

struct FlagSpec {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
  std::vector<std::string> commands;
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> s = {
      {"--a", "a", Kind::number, "parameter a", {"analyze", "vein solve", "vein check", "oscillator portrait"}},
      {"--b", "b", Kind::number, "parameter b", {"analyze", "vein solve", "vein check", "oscillator portrait"}},
      {"--c", "c", Kind::number, "solution constant c of the t-functions", {"analyze", "vein solve", "vein check"}},
      {"--k", "k", Kind::number, "parameter k (bound in expressions)", {"analyze"}},
      {"--A0", "a0", Kind::number, "constant coefficient A0", {"solve-const"}},
      {"--A1", "a1", Kind::number, "constant coefficient A1", {"solve-const"}},
      {"--A2", "a2", Kind::number, "constant coefficient A2", {"solve-const"}},
      {"--A3", "a3", Kind::number, "constant coefficient A3 (nonzero)", {"solve-const"}},
      {"--x0", "x0", Kind::number, "initial abscissa", {"solve-const"}},
      {"--y0", "y0", Kind::number, "initial value", {"solve-const"}},
      {"--f0", "f0", Kind::text, "coefficient f0(x)", {"analyze"}},
      {"--f1", "f1", Kind::text, "coefficient f1(x)", {"analyze"}},
      {"--f2", "f2", Kind::text, "coefficient f2(x)", {"analyze"}},
      {"--f3", "f3", Kind::text, "coefficient f3(x)", {"analyze"}},
      {"--normalize", "normalize", Kind::text, "unit (I(anchor) = -1) or anchor (omega(anchor) = 1)", {"analyze"}},
      {"--x-min", "x_min", Kind::number, "window start", {"analyze", "solve-const", "phi", "vein solve", "oscillator portrait"}},
      {"--x-max", "x_max", Kind::number, "window end", {"analyze", "solve-const", "phi", "vein solve", "oscillator portrait"}},
      {"--v-min", "v_min", Kind::number, "velocity window start", {"oscillator portrait"}},
      {"--v-max", "v_max", Kind::number, "velocity window end", {"oscillator portrait"}},
      {"--s-min", "s_min", Kind::number, "start of the s range scanned for branches", {"vein solve", "vein check"}},
      {"--s-max", "s_max", Kind::number, "end of the s range scanned for branches", {"vein solve", "vein check"}},
      {"--samples", "samples", Kind::integer, "sample count", {"analyze", "solve-const", "phi", "vein solve", "oscillator portrait"}},
      {"--step", "step", Kind::number, "sample spacing when --samples is not given", {"vein solve"}},
      {"--grid", "grid", Kind::text, "seed grid MxN", {"oscillator portrait"}},
      {"--zeta-max", "zeta_max", Kind::number, "integration length (default one linear period)", {"oscillator portrait"}},
      {"--branch", "branch", Kind::integer, "branch index (default: longest window)", {"vein solve"}},
      {"--family", "family", Kind::integer, "t-function family 1, 2 or 3", {"vein solve"}},
      {"--tol", "tol", Kind::number, "residual tolerance", {"vein solve", "vein check"}},
      {"--threads", "threads", Kind::integer, "worker threads (0: all cores)", {"oscillator portrait", "verify"}},
  };
  return s;
}

class Settings {
 public:
  explicit Settings(Json values) : v_(std::move(values)) {}

  bool has(const std::string& key) const { return v_.contains(key) && !v_[key].is_null(); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!v_[key].is_number()) bad(key, "a number");
    return v_[key].get<double>();
  }
  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const Json& j = v_[key];
    if (!j.is_number_integer()) bad(key, "an integer");
    return j.get<long long>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    const long long n = integer(key, static_cast<long long>(fallback));
    if (n < 2) fail(ABK_INVALID_INPUT, "'" + key + "' must be at least 2");
    return static_cast<std::size_t>(n);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!v_[key].is_string()) bad(key, "a string");
    return v_[key].get<std::string>();
  }
  const Json& raw() const { return v_; }

 private:
  [[noreturn]] static void bad(const std::string& key, const char* what) {
    fail(ABK_INVALID_INPUT, "'" + key + "' must be " + what);
  }
  Json v_;
};

Json flag_value(const FlagSpec& s, const std::string& raw) {
  switch (s.kind) {
    case Kind::number: return std::stod(raw);
    case Kind::integer: return std::stoll(raw);
    case Kind::text: return raw;
  }
  return raw;
}

Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ABK_IO, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j = Json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ABK_PARSE, "config file '" + path + "' is not a JSON object");
  }
  return j;
}

std::pair<double, double> window(const Settings& s, const char* lo_key, const char* hi_key,
                                 double lo, double hi) {
  const double a = s.number(lo_key, lo);
  const double b = s.number(hi_key, hi);
  if (!(a < b)) {
    fail(ABK_INVALID_INPUT, std::string(lo_key) + " must be below " + hi_key);
  }
  return {a, b};
}

void positive(double v, const char* what) {
  if (!(v > 0.0)) fail(ABK_INVALID_INPUT, std::string(what) + " must be positive");
}

// --- output ---------------------------------------------------------------------

struct Artifact {
  std::string name;
  std::string body;
};

/// Writes every artifact to a temporary file in `dir`, then renames them
/// into place. On any failure the temporaries and the files already renamed
/// by this call are removed.
void write_all(const fs::path& dir, const std::vector<Artifact>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ABK_IO, "cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<fs::path> temps, done;
  auto cleanup = [&] {
    for (const auto& p : temps) fs::remove(p, ec);
    for (const auto& p : done) fs::remove(p, ec);
  };
  const std::string tag = ".tmp." + std::to_string(::getpid());
  for (const auto& f : files) {
    const fs::path tmp = dir / (f.name + tag);
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << f.body;
    out.close();
    if (!out) {
      cleanup();
      fail(ABK_IO, "cannot write '" + tmp.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path dest = dir / files[i].name;
    fs::rename(temps[i], dest, ec);
    if (ec) {
      const std::string why = ec.message();
      cleanup();
      fail(ABK_IO, "cannot move output into '" + dest.string() + "': " + why);
    }
    done.push_back(dest);
  }
}

struct Output {
  std::optional<std::string> dir;
  abk_format format = ABK_CSV;

  std::string table(const std::string& stem) const {
    return stem + (format == ABK_JSON ? ".json" : ".csv");
  }
  /// The first artifact goes to stdout when no directory is given.
  void emit(const std::vector<Artifact>& files) const {
    if (dir) {
      write_all(*dir, files);
    } else if (!files.empty()) {
      std::fwrite(files.front().body.data(), 1, files.front().body.size(), stdout);
      std::fflush(stdout);
    }
  }
};

// --- commands -------------------------------------------------------------------

struct Params {
  abk_params* p = abk_params_new();
  ~Params() { abk_params_free(p); }
};

struct Expr {
  abk_expr* e = nullptr;
  ~Expr() { abk_expr_free(e); }
};

struct Equation {
  abk_equation* e = nullptr;
  ~Equation() { abk_equation_free(e); }
};

int cmd_analyze(const Settings& s, const Output& out) {
  Params params;
  if (!params.p) fail(ABK_INTERNAL, "out of memory");
  for (const char* name : {"a", "b", "c", "k"}) {
    if (s.has(name)) check(abk_params_set(params.p, name, s.number(name, 0.0)));
  }
  if (s.has("params")) {
    const Json& extra = s.raw()["params"];
    if (!extra.is_object()) fail(ABK_INVALID_INPUT, "'params' must be an object of numbers");
    for (const auto& [name, v] : extra.items()) {
      if (!v.is_number()) fail(ABK_INVALID_INPUT, "parameter '" + name + "' must be a number");
      check(abk_params_set(params.p, name.c_str(), v.get<double>()));
    }
  }
  const auto [lo, hi] = window(s, "x_min", "x_max", -1.0, 1.0);
  if (!s.has("f3")) fail(ABK_INVALID_INPUT, "f3 is required");
  std::array<Expr, 4> f;
  for (int i = 0; i < 4; ++i) {
    const std::string key = "f" + std::to_string(i);
    const std::string text = s.text(key, "0");
    if (abk_expr_parse(text.c_str(), params.p, &f[i].e) != ABK_OK) {
      Json e = Json::parse(abk_last_error_json());
      e["coefficient"] = key;
      throw Failure{ABK_PARSE, std::move(e)};
    }
  }
  Equation eq;
  check(abk_equation_new(f[0].e, f[1].e, f[2].e, f[3].e, lo, hi, &eq.e));
  const std::string norm = s.text("normalize", "unit");
  if (norm != "unit" && norm != "anchor") fail(ABK_INVALID_INPUT, "normalize must be unit or anchor");
  CStr json;
  check(abk_analyze(eq.e, s.count("samples", 21), norm == "unit", json.out()));
  out.emit({{"analyze.json", json.str()}});
  return 0;
}

int cmd_solve_const(const Settings& s, const Output& out) {
  abk_solve_const_options o;
  abk_solve_const_options_init(&o);
  if (!s.has("a3")) fail(ABK_INVALID_INPUT, "A3 is required");
  for (int i = 0; i < 4; ++i) o.A[i] = s.number("a" + std::to_string(i), 0.0);
  o.x0 = s.number("x0", o.x0);
  o.y0 = s.number("y0", o.y0);
  std::tie(o.x_min, o.x_max) = window(s, "x_min", "x_max", o.x_min, o.x_max);
  o.samples = s.count("samples", o.samples);
  CStr curve, summary;
  check(abk_solve_const(&o, out.format, curve.out(), summary.out()));
  out.emit({{out.table("solve_const"), curve.str()}, {"solve_const.json", summary.str()}});
  return 0;
}

int cmd_phi(const Settings& s, const Output& out) {
  const auto [lo, hi] = window(s, "x_min", "x_max", -3.0, 3.0);
  CStr t;
  check(abk_phi_table(lo, hi, s.count("samples", 601), out.format, t.out()));
  out.emit({{out.table("phi"), t.str()}});
  return 0;
}

int cmd_vein_solve(const Settings& s, const Output& out) {
  abk_vein_solve_options o;
  abk_vein_solve_options_init(&o);
  o.a = s.number("a", o.a);
  o.b = s.number("b", o.b);
  o.c = s.number("c", o.c);
  o.family = static_cast<int>(s.integer("family", o.family));
  o.branch = static_cast<long>(s.integer("branch", o.branch));
  std::tie(o.s_min, o.s_max) = window(s, "s_min", "s_max", o.s_min, o.s_max);
  if (s.has("x_min") || s.has("x_max")) {
    if (!s.has("x_min") || !s.has("x_max")) fail(ABK_INVALID_INPUT, "give both x_min and x_max");
    o.has_window = 1;
    std::tie(o.x_min, o.x_max) = window(s, "x_min", "x_max", 0.0, 0.0);
  }
  o.step = s.number("step", o.step);
  positive(o.step, "step");
  if (s.has("samples")) o.samples = s.count("samples", 2);
  o.tol = s.number("tol", o.tol);
  positive(o.tol, "tol");
  CStr curve, summary;
  check(abk_vein_solve(&o, out.format, curve.out(), summary.out()));
  out.emit({{out.table("vein_solve"), curve.str()}, {"vein_solve.json", summary.str()}});
  return 0;
}

int cmd_vein_check(const Settings& s, const Output& out) {
  const auto [lo, hi] = window(s, "s_min", "s_max", -5.0, 5.0);
  const double tol = s.number("tol", 1e-6);
  positive(tol, "tol");
  CStr json;
  int passed = 0;
  check(abk_vein_check(s.number("a", 1.0), s.number("b", -2.0), s.number("c", 1.0), lo, hi, tol,
                       json.out(), &passed));
  out.emit({{"vein_check.json", json.str()}});
  return passed ? 0 : 1;
}

int cmd_portrait(const Settings& s, const Output& out) {
  abk_portrait_options o;
  abk_portrait_options_init(&o);
  o.a = s.number("a", o.a);
  o.b = s.number("b", o.b);
  if (s.has("x_min") || s.has("x_max")) {
    if (!s.has("x_min") || !s.has("x_max")) fail(ABK_INVALID_INPUT, "give both x_min and x_max");
    o.has_x_window = 1;
    std::tie(o.x_min, o.x_max) = window(s, "x_min", "x_max", 0.0, 0.0);
  }
  if (s.has("v_min") || s.has("v_max")) {
    if (!s.has("v_min") || !s.has("v_max")) fail(ABK_INVALID_INPUT, "give both v_min and v_max");
    o.has_v_window = 1;
    std::tie(o.v_min, o.v_max) = window(s, "v_min", "v_max", 0.0, 0.0);
  }
  if (s.has("grid")) {
    const std::string g = s.text("grid", "");
    unsigned long m = 0, n = 0;
    char sep = 0, tail = 0;
    if (std::sscanf(g.c_str(), "%lu%c%lu%c", &m, &sep, &n, &tail) != 3 || (sep != 'x' && sep != 'X') ||
        m == 0 || n == 0) {
      fail(ABK_INVALID_INPUT, "grid must look like MxN with M, N >= 1");
    }
    o.grid_x = m;
    o.grid_v = n;
  }
  if (s.has("zeta_max")) {
    o.zeta_max = s.number("zeta_max", 0.0);
    positive(o.zeta_max, "zeta_max");
  }
  o.samples_per_direction = s.count("samples", o.samples_per_direction);
  const long long threads = s.integer("threads", 0);
  if (threads < 0) fail(ABK_INVALID_INPUT, "threads must be >= 0");
  o.threads = static_cast<unsigned>(threads);
  CStr traj, iso, coef, fp;
  check(abk_oscillator_portrait(&o, out.format, traj.out(), iso.out(), coef.out(), fp.out()));
  out.emit({{"fixed_points.json", fp.str()},
            {out.table("trajectories"), traj.str()},
            {out.table("isoclines"), iso.str()},
            {out.table("coefficients"), coef.str()}});
  return 0;
}

int cmd_verify(const Settings& s, const Output& out) {
  const long long threads = s.integer("threads", 0);
  if (threads < 0) fail(ABK_INVALID_INPUT, "threads must be >= 0");
  CStr json;
  int passed = 0;
  check(abk_verify(static_cast<unsigned>(threads), json.out(), &passed));
  out.emit({{"verify.json", json.str()}});
  // one line per criterion on stderr for people
  const Json j = Json::parse(json.str());
  for (const auto& c : j["criteria"]) {
    std::fprintf(stderr, "[%s] %2d %s: %s\n", c["passed"].get<bool>() ? "PASS" : "FAIL",
                 c["id"].get<int>(), c["name"].get<std::string>().c_str(),
                 c["detail"].get<std::string>().c_str());
  }
  return passed ? 0 : 1;
}

using Handler = int (*)(const Settings&, const Output&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"analyze", cmd_analyze},     {"solve-const", cmd_solve_const},
      {"phi", cmd_phi},             {"vein solve", cmd_vein_solve},
      {"vein check", cmd_vein_check}, {"oscillator portrait", cmd_portrait},
      {"verify", cmd_verify},
  };
  return h;
}

void print_error(const Json& error) {
  const std::string s = Json{{"error", error}}.dump();
  std::fprintf(stderr, "%s\n", s.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abelkit: Abel equations, third-order hyperbolic functions and the Vein oscillator"};
  app.set_version_flag("--version", std::string(abk_version()));
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out_dir, format = "csv";
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--out", out_dir, "output directory (default: first output to stdout)");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, CLI::App*> commands;
  commands["analyze"] = app.add_subcommand("analyze", "invariants of an equation given by expressions");
  commands["solve-const"] = app.add_subcommand("solve-const", "constant-coefficient initial value problem");
  commands["phi"] = app.add_subcommand("phi", "table of phi1, phi2, phi3");
  CLI::App* vein = app.add_subcommand("vein", "the rational-coefficient equation");
  vein->require_subcommand(1);
  commands["vein solve"] = vein->add_subcommand("solve", "explicit solution on one branch, with residuals");
  commands["vein check"] = vein->add_subcommand("check", "identity and invariant checks");
  CLI::App* osc = app.add_subcommand("oscillator", "the associated nonlinear oscillator");
  osc->require_subcommand(1);
  commands["oscillator portrait"] = osc->add_subcommand("portrait", "phase-portrait data");
  commands["verify"] = app.add_subcommand("verify", "run the acceptance suite");
  for (auto& [name, cmd] : commands) cmd->fallthrough();

  std::map<std::string, std::string> raw;
  std::vector<std::string> param_args;
  for (const FlagSpec& flag : flag_specs()) {
    for (const auto& name : flag.commands) {
      CLI::Option* opt = commands.at(name)->add_option(flag.flag, raw[flag.key], flag.help);
      if (flag.kind == Kind::number) opt->check(CLI::Number);
      if (flag.kind == Kind::integer) opt->check(CLI::TypeValidator<long long>());
    }
  }
  commands.at("analyze")->add_option("--param", param_args, "extra parameter NAME=VALUE (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error({{"code", "invalid_input"}, {"message", e.what()}});
    return ABK_INVALID_INPUT;
  }

  try {
    Json values = Json::object();
    if (!config_path.empty()) values = load_config(config_path);

    std::string command;
    for (const auto& [name, cmd] : commands) {
      if (cmd->parsed()) command = name;
    }
    if (command.empty()) {
      if (values.contains("subcommand") && values["subcommand"].is_string()) {
        command = values["subcommand"].get<std::string>();
      } else {
        std::cout << app.help();
        return ABK_INVALID_INPUT;
      }
    }
    if (!handlers().count(command)) fail(ABK_INVALID_INPUT, "unknown subcommand '" + command + "'");

    for (const FlagSpec& flag : flag_specs()) {
      const auto& cmds = flag.commands;
      if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) continue;
      if (commands.at(command)->count(flag.flag) == 0) continue;
      try {
        values[flag.key] = flag_value(flag, raw[flag.key]);
      } catch (const std::exception&) {
        fail(ABK_INVALID_INPUT, std::string(flag.flag) + ": cannot read '" + raw[flag.key] + "'");
      }
    }
    for (const std::string& kv : param_args) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ABK_INVALID_INPUT, "--param expects NAME=VALUE");
      try {
        values["params"][kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        fail(ABK_INVALID_INPUT, "--param " + kv + ": value is not a number");
      }
    }

    Output out;
    if (!out_dir.empty()) {
      out.dir = out_dir;
    } else if (values.contains("out") && values["out"].is_string()) {
      out.dir = values["out"].get<std::string>();
    }
    if (app.count("--format") == 0 && values.contains("format") && values["format"].is_string()) {
      format = values["format"].get<std::string>();
    }
    if (format != "csv" && format != "json") fail(ABK_INVALID_INPUT, "format must be csv or json");
    out.format = format == "json" ? ABK_JSON : ABK_CSV;
    return handlers().at(command)(Settings(std::move(values)), out);
  } catch (const Failure& f) {
    print_error(f.error);
    return f.status;
  } catch (const std::exception& e) {
    print_error({{"code", "internal"}, {"message", e.what()}});
    return ABK_INTERNAL;
  }
}
