#pragma once

#include <optional>
#include <string>
#include <vector>

#include "film/layout.hpp"
#include "film/schedule.hpp"

namespace film {

enum class ConstructionKind { flat, laminate, branching };

std::string to_string(ConstructionKind k);
ConstructionKind construction_from_string(const std::string& s);

// Laminate scales h = l1 (sigma gamma)^{2/5}, eps = h, delta = l1 sigma^{4/5} gamma^{-1/5}.
struct LaminateScales {
  double h = 0.0, delta = 0.0, eps = 0.0;
};

struct Overrides {
  std::optional<double> h, delta, eps;
  std::optional<int> levels;
  // Multiplies the derived laminate delta (ignored when delta is given).
  std::optional<double> delta_factor;
};

// Factor (2K)^{1/3} with K = int psi''^2 / (2 c_*): the delta minimizing the
// bulk laminate energy K (sigma l1)^2 / delta^2 + gamma delta / h per unit area
// is (2K)^{1/3} (sigma l1)^{2/3} gamma^{-1/3} h^{1/3}.  Cosine: (2 pi^2)^{1/3}.
double balanced_delta_factor(ProfileKind k = ProfileKind::cosine);

// Requires sigma gamma <= 1 and gamma >= 1 unless all three scales are overridden.
LaminateScales laminate_scales(const Params& p, const Overrides& o = {});

struct Construction {
  ConstructionKind kind = ConstructionKind::flat;
  Layout layout;
  std::optional<LaminateScales> laminate;
  std::optional<BranchSchedule> schedule;
  double lift_height = 0.0;
  double lift_width = 0.0;
};

// Reason the construction's hypotheses fail, or nullopt when it is available.
std::optional<std::string> unavailable(ConstructionKind k, const Params& p);

Layout flat_layout(const Params& p);
Layout laminate_layout(const Params& p, const LaminateScales& s);
Layout branching_layout(const Params& p, const BranchSchedule& b);

Construction make_construction(ConstructionKind k, const Params& p, const Overrides& o = {});

// eta = (sigma l1 h_b)^{1/2} max(1, gamma)^{-1/4}.
double lift_width(const Params& p, double h_b);
// Prepends a lift layer of width eta on which w = h_b (1 - S(x/eta)) and
// shifts the inner bands by eta.  Requires h_b / l1 <= min(sigma, sigma^-1 gamma^-3/2).
Layout buffer_lift(const Layout& inner, double h_b);
Construction buffer_lift(const Construction& inner, double h_b);

// Throws DomainError when the grid cannot resolve the finest folds
// (8 samples per fold half-width in y, 4 per boundary-layer width in x).
void require_resolution(const Construction& c, const Grid& grid);

DisplacementField flat_construction(const Params& p, const Grid& grid);
DisplacementField laminate_full(const Params& p, const Grid& grid, const Overrides& o = {});
DisplacementField branching_full(const Params& p, const Grid& grid, const Overrides& o = {});
DisplacementField buffer_lift(const Layout& inner, const Grid& grid, double h_b);

struct CandidateResult {
  ConstructionKind kind = ConstructionKind::flat;
  std::string skipped;  // empty when evaluated
  double total = 0.0;
};

struct Selection {
  Construction construction;
  TiledEnergy energy;
  std::vector<CandidateResult> candidates;
};

// Minimum over flat, laminate and branching by tiled energy; ties go to the
// earlier (simpler) construction.
Selection best_construction(const Params& p, const ResolutionPolicy& policy = {});

struct FieldSelection {
  Construction construction;
  DisplacementField field;
  EnergyBreakdown energy;
  std::vector<CandidateResult> candidates;
};

// Same choice made on one global grid; candidates the grid cannot resolve are skipped.
FieldSelection best_construction(const Params& p, const Grid& grid);

}  // namespace film
