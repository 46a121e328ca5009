#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "abelkit/format.hpp"
#include "abelkit/oscillator.hpp"
#include "abelkit/scalar_function.hpp"
#include "abelkit/vein.hpp"

// Table and JSON builders shared by the C API, the CLI and the acceptance
// checks. Everything here is deterministic for a given input.
namespace abelkit::reports {

using Json = nlohmann::ordered_json;

/// x, phi1, phi2, phi3 at `samples` points of [lo, hi].
Table phi_table(Interval window, std::size_t samples);

struct CurveReport {
  Table curve;
  Json summary;
};

struct SolveConstOptions {
  std::array<double, 4> A{0.0, 0.0, 0.0, 1.0};
  double x0 = 0.0;
  double y0 = 0.5;
  Interval window{-1.0, 1.0};
  std::size_t samples = 201;
};

/// Curve columns x, y. Samples past a blow-up abscissa are dropped (the
/// curve stops short of it) and the summary records where it happens.
CurveReport solve_const(const SolveConstOptions& opt);

struct VeinSolveOptions {
  vein::VeinParams params;
  int family = 1;
  /// Default: the branch with the longest solve window.
  std::optional<std::size_t> branch;
  double s_min = -5.0;
  double s_max = 5.0;
  /// Default: vein::solve_window of the branch.
  std::optional<Interval> window;
  /// Sample spacing; overridden by `samples` when set.
  double step = 1e-3;
  std::optional<std::size_t> samples;
  double tol = 1e-6;
};

/// Curve columns x, y, residual.
CurveReport vein_solve(const VeinSolveOptions& opt);

/// Branch with the longest solve window (first on ties), if any has one.
std::optional<std::size_t> longest_branch(const vein::BranchTable& table);

struct InvariantSample {
  double x;
  double invariant;
};

/// Normal-form invariant at `count` points spread over a+b -/+ 6, kept at
/// least 0.1 from bx + a^2 = 0 and 0.01 from x = a+b.
std::vector<InvariantSample> vein_invariant_samples(const vein::VeinParams& params,
                                                    std::size_t count);

struct VeinCheckOptions {
  vein::VeinParams params;
  double s_min = -5.0;
  double s_max = 5.0;
  double tol = 1e-6;
};

Json vein_check(const VeinCheckOptions& opt);

struct PortraitReport {
  Table trajectories;
  Table isoclines;
  Table coefficients;
  Json fixed_points;
};

/// Missing windows fall back to oscillator::default_window.
PortraitReport portrait(double a, double b, std::optional<Interval> x_window,
                        std::optional<Interval> v_window,
                        const oscillator::PortraitOptions& opt = {});

Json fixed_points_json(double a, double b, const std::vector<oscillator::FixedPointReport>& fps);

struct AnalyzeOptions {
  std::array<ScalarFunction, 4> f;
  std::array<std::string, 4> text;
  Interval window{-1.0, 1.0};
  std::size_t samples = 21;
  /// Scale omega so |I(anchor)| = 1; otherwise omega(anchor) = 1.
  bool unit_normalize = true;
};

Json analyze(const AnalyzeOptions& opt);

}  // namespace abelkit::reports
