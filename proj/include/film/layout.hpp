#pragma once

#include <string>
#include <variant>
#include <vector>

#include "film/energy.hpp"
#include "film/field.hpp"
#include "film/profiles.hpp"

namespace film {

struct FlatShape {};
struct LaminateShape {
  double h, delta;
  ProfileKind profile;
};
struct BoundaryLayerShape {
  double eps, h, delta;
  ProfileKind profile;
};
struct FoldSplitShape {
  double h, delta, length;
};
struct FoldShrinkShape {
  double h, delta, lambda, length;
};
struct LiftShape {
  double height, eta;
};

using CellShape = std::variant<FlatShape, LaminateShape, BoundaryLayerShape, FoldSplitShape, FoldShrinkShape, LiftShape>;

// Half-period of the y-periodic cell, 0 for shapes without y-structure.
double half_period(const CellShape& s);
std::string shape_name(const CellShape& s);

// A vertical strip [x_begin, x_end] filled with copies of one cell stacked
// from y = 0; local_begin is the cell's own x at x_begin.  In every cell u
// equals the global x/2 on the cell boundary.
struct Band {
  std::string role;
  double x_begin = 0.0;
  double x_end = 0.0;
  double local_begin = 0.0;
  CellShape shape;
};

struct Layout {
  Params params;
  double height = 1.0;
  double edge_height = 0.0;
  std::vector<Band> bands;

  // Keeps [0, l1] only; bands are clipped, empty ones dropped.
  void restrict_to_domain();
};

// Number of whole periods 2h that fit into the height.
long period_count(double height, double h);

DisplacementField rasterize(const Layout& layout, const Grid& grid);

struct ResolutionPolicy {
  int samples = 12;
  double max_nodes = 3.0e7;
};

struct BandEnergy {
  std::string role;
  double x_begin = 0.0, x_end = 0.0;
  long copies = 0;
  Eigen::Index nx = 0, ny = 0;
  EnergyBreakdown energy;
};

struct TiledEnergy {
  EnergyBreakdown energy;
  std::vector<BandEnergy> bands;
  Eigen::Index max_nx = 0, max_ny = 0;
};

// Tile grid for one period of a band, sized by the policy.
Grid tile_grid(const Band& band, double height, const ResolutionPolicy& policy);

// Energy as the sum over bands of (copies x one discretized period) plus the
// flat remainder strips, each band on its own grid.
TiledEnergy tiled_energy(const Layout& layout, const ResolutionPolicy& policy = {});

// Smallest fold half-width across the layout (0 if there are no folds).
double finest_width(const Layout& layout);

}  // namespace film
