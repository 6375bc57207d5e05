#pragma once

#include <optional>
#include <string>
#include <vector>

#include "film/params.hpp"

namespace film {

enum class ScheduleCase { gamma_ge_1, gamma_lt_sigma, gamma_mid };

std::string to_string(ScheduleCase c);

// Level i = 0 is the coarsest (bulk side), level N the finest (next to the
// boundary layer).  h, delta have N+1 entries, L has N.
struct BranchSchedule {
  int N = 0;
  std::vector<double> h, delta, L;
  double eps = 0.0;
  double h0 = 0.0;          // realized 2^N h_N
  double h0_nominal = 0.0;  // target coarsest scale before rounding N
  double delta0 = 0.0;
  ScheduleCase regime_case = ScheduleCase::gamma_ge_1;
  int switch_index = -1;

  double hN() const { return h.back(); }
  double deltaN() const { return delta.back(); }
  // Width of the cascade from the boundary layer to the bulk: eps + 2 sum L_i.
  double cascade_width() const;
};

// Requires gamma <= sigma^-4/9.  levels overrides N (h0 = 2^N h_N).
BranchSchedule branch_schedule(const Params& p, std::optional<int> levels = std::nullopt);

}  // namespace film
