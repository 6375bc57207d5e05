#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "film/cells.hpp"
#include "film/constructions.hpp"
#include "film/regimes.hpp"

namespace film {

enum class SweepAxis { sigma, gamma, curve };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

// sigma ray: gamma fixed, values are sigmas; gamma ray: sigma fixed, values
// are gammas; curve: values are sigmas and gamma = coefficient sigma^power.
struct SweepSpec {
  SweepAxis axis = SweepAxis::sigma;
  std::vector<double> values;
  double sigma = 0.01;
  double gamma = 0.0;
  double curve_power = 0.0;
  double curve_coefficient = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
  ResolutionPolicy policy;
  std::optional<ConstructionKind> construction;  // unset: best construction
  double delta_factor = 1.0;                     // laminate delta multiplier, fixed construction only

  Params point(double value) const;
  // Non-empty, valid points, a single regime.
  void validate() const;
};

// n values from a to b, equally spaced in log.
std::vector<double> log_spaced(double a, double b, int n);

struct SweepRow {
  double sigma = 0.0, gamma = 0.0;
  EnergyBreakdown energy;
  RegimeLabel regime = RegimeLabel::A;
  ConstructionKind construction = ConstructionKind::flat;
  Eigen::Index nx = 0, ny = 0;  // largest tile
  int N = 0;
  double h0 = 0.0, deltaN = 0.0;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::sigma;
  std::vector<SweepRow> rows;  // ascending in the sweep coordinate
};

// Points run in parallel; the table does not depend on the worker count.
SweepTable run_sweep(const SweepSpec& spec);
std::string sweep_csv(const SweepTable& t);

enum class FitCoordinate { sigma, gamma };

struct Fit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, r2 = 0.0;
  std::size_t n = 0;
};

// Least squares of log E on log x.
Fit fit_power_law(const std::vector<double>& x, const std::vector<double>& energy);
// Needs at least 4 rows from one regime.
Fit fit_exponent(const SweepTable& t, FitCoordinate c);

struct ConvergenceLevel {
  Grid grid;
  EnergyBreakdown energy;
  double error = 0.0;
};

struct ConvergenceReport {
  std::string construction;
  std::string reference;  // "closed_form" or "richardson"
  double reference_value = 0.0;
  std::vector<ConvergenceLevel> levels;
  std::vector<double> orders;  // between consecutive error pairs
  double order = 0.0;          // from the finest pair
  bool exact = false;          // errors at round-off on every grid
};

// construction: laminate_cell (closed form, cell from `cell`), flat (closed
// form), laminate or branching (Richardson against the finest grid).  The
// ladder needs >= 3 grids, each refining the previous by integer factors on
// the same extents.
ConvergenceReport convergence_study(const std::string& construction, const Params& p, const std::vector<Grid>& ladder,
                                    const LaminateCellSpec& cell = {});

// Grids for a laminate cell with `samples` nodes per delta on the coarsest level, doubling.
std::vector<Grid> laminate_cell_ladder(const LaminateCellSpec& cell, int samples, int levels);
std::vector<Grid> domain_ladder(const Params& p, Eigen::Index nx, Eigen::Index ny, int levels);

// 2 pi^2 (sigma l1)^2 l h / delta^2 + 2 gamma l delta.
double laminate_cell_energy(const LaminateCellSpec& cell, const Params& p);

ConstructionKind regime_construction(RegimeLabel r);

struct SandwichReport {
  RegimeLabel regime = RegimeLabel::A;
  std::vector<Params> points;
  std::vector<double> upper, lower, ratios;
  double variation = 1.0;  // max ratio / min ratio
  bool pass = true;
};

// Upper energy from the regime's own construction (flat in A, branching in D).
SandwichReport sandwich_check(const std::vector<Params>& points, const ResolutionPolicy& policy = {},
                              double max_variation = 5.0);

struct PoincareReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int resolution = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double bound = 0.0;            // 6 / pi^2
  double scale_deviation = 0.0;  // max |ratio(f) - ratio(7.3 f)|
  bool pass = true;
};

// Random smooth vector fields on the unit square that vanish on a randomly
// chosen half; checks int |f|^2 <= (6/pi^2) int |Df|^2.
PoincareReport poincare_check(std::size_t n, std::uint64_t seed = 1, int resolution = 192);

}  // namespace film
