#pragma once

#include <string>
#include <vector>

#include "film/energy.hpp"
#include "film/field.hpp"

namespace film {

struct MinimizeOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;  // relative energy decrease
  double step = 1e-3;
  double backtrack = 0.5;
  bool project = true;
  double armijo = 1e-4;
  double min_step = 1e-14;
  int patience = 10;  // consecutive small decreases before stopping

  void validate() const;
};

struct FieldGradient {
  Array2<double> u, v, w;
};

// Gradient of the discrete stretching + bending energy (bonding excluded).
// Slots of the clamped band are zero.
FieldGradient discrete_gradient(const DisplacementField& f);

// Clamped degrees of freedom when the grid starts at x = 0: u and v on the
// first column and w on the first four columns, which carry the one-sided
// slope stencils of the clamping condition.
constexpr Eigen::Index kClampedWColumns = 4;

struct IterationRecord {
  int iteration = 0;
  EnergyBreakdown energy;
  double step = 0.0;
};

enum class MinimizeStatus { converged, iteration_cap, no_descent, stalled };

std::string to_string(MinimizeStatus s);

struct MinimizeResult {
  DisplacementField field;
  std::vector<IterationRecord> log;
  MinimizeStatus status = MinimizeStatus::converged;
  std::string diagnostic;
};

// Projected gradient descent with backtracking on the total energy.  The
// seed is first projected (w >= 0, clamped values) and switched to the
// threshold support; log entry 0 is that projected seed.
MinimizeResult minimize(const DisplacementField& field0, const MinimizeOptions& opts = {});

std::string iteration_csv(const std::vector<IterationRecord>& log);

}  // namespace film
