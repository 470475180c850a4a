#pragma once

// Scenario forecast for 1-parameter families and its numerical check.
// The forecast is symbolic: it reads the classification invariants and the
// unfolding coefficients and writes down what the singular set must look
// like on each side of eps = 0. The check evaluates the brackets in
// floating point over a parameter grid, locates singular points by Newton
// iteration, labels their linearizations with margin-guarded sign tests,
// and compares against the forecast.

#include "poisson3/classify.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace poisson3 {

enum class Scenario {
  saddle_node_V,
  A_split,
  N_a,
  N_b,
  N_c,
  none_irremovable,
  unknown
};

const char* scenario_name(Scenario s);

// Labels a numerical linearization can receive. Degenerate classes are not
// expected at eps != 0 sample points, so anything outside this list reports
// as unresolved.
enum class PointClass {
  so3,
  sl2,
  V_node,
  V_saddle,
  V_focus,
  V_saddle_node,
  unresolved
};

const char* point_class_name(PointClass c);

// Expected picture on one side of eps = 0. Curves are listed by the label
// their sample points carry; for a two-curve side the labels distinguish
// the curves.
struct SideForecast {
  std::vector<PointClass> points;         // isolated points, as a multiset
  std::vector<PointClass> curve_classes;  // one label per predicted curve
  bool closed_curve = false;              // closed loop vs unbounded branches
};

struct BifurcationReport {
  Scenario scenario = Scenario::unknown;
  SingularityClass base;
  SideForecast minus, plus;
  std::optional<Rat> radius2_over_eps;  // leading coefficient of radius^2
  bool generic = false;
  std::string note;  // names the failing condition when scenario == unknown
};

// Symbolic forecast; total. Pre: the eps = 0 member is singular at the
// origin. Degenerate inputs land in scenario unknown with the reason named.
BifurcationReport predict(const PoissonFamily& p, int degree);

struct NumericOptions {
  double box = 1.0;        // half width of the search cube
  double tol = 1e-9;       // residual acceptance for Newton
  int seeds_per_axis = 5;  // uniform seed grid resolution
  double sign_margin = 1e-6;  // relative margin for sign decisions
};

struct SingularPointRecord {
  double eps = 0;
  std::array<double, 3> x{0, 0, 0};
  double residual = 0;
  int rank = 3;  // bracket Jacobian rank: 3 isolated point, 2 curve sample
  PointClass cls = PointClass::unresolved;
  double margin = 0;  // smallest decisive quantity of the label, relative
};

// Newton search over a seed grid; converged points are deduplicated within
// 10 tol and sorted lexicographically. Non-convergence gives an empty list.
std::vector<SingularPointRecord> find_singular_points(const PoissonFamily& p,
                                                      double eps,
                                                      const NumericOptions& opt);

// Margin-guarded label of the linearization at a numerical singular point.
// Derivatives are exact polynomial partials evaluated at the point.
PointClass classify_point(const PoissonFamily& p, double eps,
                          const std::array<double, 3>& pt,
                          const NumericOptions& opt,
                          double* margin_out = nullptr);

struct EpsVerdict {
  double eps = 0;
  std::vector<SingularPointRecord> records;
  std::string outcome;  // "match" | "mismatch" | "skipped"
  std::string note;
  // Curve sample diagnostics: mean x^2 + y^2 and x^2 - y^2, largest |z|,
  // and the closed / open call ("" when there are no or too few samples).
  double curve_r2_mean = 0;
  double curve_h_mean = 0;
  double curve_zmax = 0;
  std::string curve_shape;
};

struct VerificationReport {
  BifurcationReport forecast;
  std::vector<EpsVerdict> per_eps;
  bool verdict = false;  // every decidable grid value matches
};

// Evaluates the family over the grid (parallel across eps, deterministic
// order) and compares counts, set dimensions and labels with the forecast.
// Entries at eps = 0 or with unresolved labels are skipped, not failed.
VerificationReport verify(const PoissonFamily& p,
                          const std::vector<double>& eps_grid,
                          const NumericOptions& opt, int degree);

}  // namespace poisson3
