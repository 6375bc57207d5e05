#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "film/grid.hpp"
#include "film/params.hpp"

namespace film {

template <typename Scalar>
using Array2 = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Mask = Array2<std::uint8_t>;

// analytic: the mask was written by a construction and marks exactly where
// w > 0.  threshold: the mask is w > tau_w, recomputed from samples.
enum class SupportKind { analytic, threshold };

// Samples u(i, j), v(i, j), w(i, j) at node (x_i, y_j); row i is one x-station.
template <typename Scalar>
struct BasicDisplacementField {
  Grid grid;
  Params params;
  Array2<Scalar> u, v, w;
  Mask support;
  SupportKind support_kind = SupportKind::threshold;
  // w prescribed on the clamped edge; nonzero only under a buffer layer.
  double edge_height = 0.0;

  BasicDisplacementField() = default;
  BasicDisplacementField(const Grid& g, const Params& p)
      : grid(g), params(p),
        u(Array2<Scalar>::Zero(g.nx, g.ny)), v(Array2<Scalar>::Zero(g.nx, g.ny)), w(Array2<Scalar>::Zero(g.nx, g.ny)),
        support(Mask::Zero(g.nx, g.ny))
  {
  }

  Scalar support_threshold() const
  {
    using std::max;
    return Scalar(1e-8) * max(Scalar(1), w.abs().maxCoeff());
  }

  void refresh_threshold_support()
  {
    const Scalar tau = support_threshold();
    support = (w > tau).template cast<std::uint8_t>();
    support_kind = SupportKind::threshold;
  }
};

using DisplacementField = BasicDisplacementField<double>;

}  // namespace film
