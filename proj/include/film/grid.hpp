#pragma once

#include <cmath>

#include <Eigen/Core>

#include "film/errors.hpp"
#include "film/params.hpp"

namespace film {

// Uniform tensor grid on [x0, x0+lx] x [y0, y0+ly]; node (i, j) sits at
// (x(i), y(j)) and both end points are nodes.
struct Grid {
  Eigen::Index nx = 4;
  Eigen::Index ny = 4;
  double x0 = 0.0;
  double y0 = 0.0;
  double lx = 1.0;
  double ly = 1.0;

  double hx() const { return lx / static_cast<double>(nx - 1); }
  double hy() const { return ly / static_cast<double>(ny - 1); }
  double x(Eigen::Index i) const { return x0 + lx * (static_cast<double>(i) / static_cast<double>(nx - 1)); }
  double y(Eigen::Index j) const { return y0 + ly * (static_cast<double>(j) / static_cast<double>(ny - 1)); }
  Eigen::Index size() const { return nx * ny; }

  void validate() const;

  static Grid domain(const Params& p, Eigen::Index nx, Eigen::Index ny) { return {nx, ny, 0.0, 0.0, p.l1, p.l2}; }
};

inline void Grid::validate() const
{
  if (nx < 4 || ny < 4)
    throw DomainError("grid needs at least 4 samples per direction");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly) || !std::isfinite(x0) || !std::isfinite(y0))
    throw DomainError("grid extents must be finite and positive");
}

}  // namespace film
