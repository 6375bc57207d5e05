#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "film/errors.hpp"
#include "film/field.hpp"
#include "film/parallel.hpp"
#include "film/stencils.hpp"

namespace film {

template <typename Scalar>
struct BasicEnergyBreakdown {
  Scalar stretching{0};
  Scalar bending{0};
  Scalar bonding{0};
  Scalar total{0};
};

using EnergyBreakdown = BasicEnergyBreakdown<double>;

template <typename Scalar>
void validate_field(const BasicDisplacementField<Scalar>& f)
{
  f.grid.validate();
  f.params.validate();
  const auto nx = f.grid.nx, ny = f.grid.ny;
  auto shaped = [&](auto const& a) { return a.rows() == nx && a.cols() == ny; };
  if (!shaped(f.u) || !shaped(f.v) || !shaped(f.w) || !shaped(f.support))
    throw DomainError("field arrays do not match the grid shape");
  constexpr double slack = 1.0 + 1e-9;
  if (f.grid.lx > f.params.l1 * slack || f.grid.ly > f.params.l2 * slack)
    throw DomainError("grid extends beyond the (l1, l2) domain of the params");
  if (!f.u.allFinite() || !f.v.allFinite() || !f.w.allFinite())
    throw NumericalError("field contains NaN or Inf samples");
}

// Mask used for the bonding term: the construction's own mask, or w > tau_w.
template <typename Scalar>
Mask bonding_mask(const BasicDisplacementField<Scalar>& f)
{
  if (f.support_kind == SupportKind::analytic)
    return f.support;
  const Scalar tau = f.support_threshold();
  return (f.w > tau).template cast<std::uint8_t>();
}

// Node weight of the delaminated-set indicator.  Off the support the value is
// the mean of the one-sided limits: 1/2 on a support edge, 1 on a bonded line
// squeezed between two supports or on a domain edge facing the support.
inline double support_weight(const Mask& m, Eigen::Index i, Eigen::Index j)
{
  if (m(i, j))
    return 1.0;
  const auto nx = m.rows(), ny = m.cols();
  const double ax = i == 0 ? m(1, j) : i == nx - 1 ? m(nx - 2, j) : 0.5 * (m(i - 1, j) + m(i + 1, j));
  const double ay = j == 0 ? m(i, 1) : j == ny - 1 ? m(i, ny - 2) : 0.5 * (m(i, j - 1) + m(i, j + 1));
  return std::max(ax, ay);
}

// Discrete energy.  Stretching: each component of the strain residual is
// sampled where its differences are centered (x-edges, y-edges, cell centers)
// with the matching tensor midpoint/trapezoid rule.  Bending: nodal second
// differences, trapezoid rule.  For analytic masks a bonded node next to one
// side of the support uses the mean of the squared one-sided limits, which
// keeps second order across the curvature jump at the support edge.
template <typename Scalar>
BasicEnergyBreakdown<Scalar> evaluate_energy(const BasicDisplacementField<Scalar>& f)
{
  validate_field(f);
  using Eigen::Index;
  const Index nx = f.grid.nx, ny = f.grid.ny;
  const Scalar hx = Scalar(f.grid.hx()), hy = Scalar(f.grid.hy());
  const bool analytic = f.support_kind == SupportKind::analytic;
  const Mask mask = bonding_mask(f);
  auto tx = [&](Index i) { return (i == 0 || i == nx - 1) ? hx / 2 : hx; };
  auto ty = [&](Index j) { return (j == 0 || j == ny - 1) ? hy / 2 : hy; };

  std::vector<Scalar> rs(nx), rb(nx), ro(nx);
  parallel_for(nx, [&](std::ptrdiff_t i) {
    const Scalar* u0 = &f.u(i, 0);
    const Scalar* v0 = &f.v(i, 0);
    const Scalar* w0 = &f.w(i, 0);
    Scalar t3(0);
    for (Index j = 0; j + 1 < ny; ++j) {
      const Scalar vy = (v0[j + 1] - v0[j]) / hy, wy = (w0[j + 1] - w0[j]) / hy;
      const Scalar r = 2 * vy + wy * wy - 1;
      t3 += r * r;
    }
    Scalar s = tx(i) * hy * t3;
    if (i + 1 < nx) {
      const Scalar* u1 = &f.u(i + 1, 0);
      const Scalar* v1 = &f.v(i + 1, 0);
      const Scalar* w1 = &f.w(i + 1, 0);
      Scalar t1(0), t2(0);
      for (Index j = 0; j < ny; ++j) {
        const Scalar ux = (u1[j] - u0[j]) / hx, wx = (w1[j] - w0[j]) / hx;
        const Scalar r = 2 * ux + wx * wx - 1;
        t1 += ty(j) * r * r;
      }
      for (Index j = 0; j + 1 < ny; ++j) {
        const Scalar uy = ((u0[j + 1] - u0[j]) + (u1[j + 1] - u1[j])) / (2 * hy);
        const Scalar vx = ((v1[j] - v0[j]) + (v1[j + 1] - v0[j + 1])) / (2 * hx);
        const Scalar wx = ((w1[j] - w0[j]) + (w1[j + 1] - w0[j + 1])) / (2 * hx);
        const Scalar wy = ((w0[j + 1] - w0[j]) + (w1[j + 1] - w1[j])) / (2 * hy);
        const Scalar r = uy + vx + wx * wy;
        t2 += r * r;
      }
      s += hx * t1 + 2 * hx * hy * t2;
    }
    rs[i] = s;

    const stencil::Taps sx = stencil::second(nx, i), dx = stencil::first(nx, i);
    const bool x_interior = i > 0 && i + 1 < nx;
    Scalar b(0), a(0);
    for (Index j = 0; j < ny; ++j) {
      const stencil::Taps sy = stencil::second(ny, j), dy = stencil::first(ny, j);
      Scalar wyy = stencil::apply(sy, w0) / (hy * hy);
      Scalar wxx(0), wxy(0);
      for (int m = 0; m < sx.count; ++m)
        wxx += sx.c[m] * f.w(sx.start + m, j);
      wxx /= hx * hx;
      for (int m = 0; m < dx.count; ++m)
        wxy += dx.c[m] * stencil::apply(dy, &f.w(dx.start + m, 0));
      wxy /= hx * hy;
      Scalar qxx = wxx * wxx, qyy = wyy * wyy;
      if (analytic && !mask(i, j)) {
        if (x_interior && mask(i - 1, j) != mask(i + 1, j))
          qxx *= 2;
        if (j > 0 && j + 1 < ny && mask(i, j - 1) != mask(i, j + 1))
          qyy *= 2;
      }
      b += ty(j) * (qxx + 2 * wxy * wxy + qyy);
      a += ty(j) * Scalar(support_weight(mask, i, j));
    }
    rb[i] = tx(i) * b;
    ro[i] = tx(i) * a;
  });

  BasicEnergyBreakdown<Scalar> e;
  e.stretching = stencil::pairwise_sum(rs.data(), nx);
  e.bending = Scalar(f.params.bending_prefactor()) * stencil::pairwise_sum(rb.data(), nx);
  e.bonding = Scalar(f.params.gamma) * stencil::pairwise_sum(ro.data(), nx);
  e.total = e.stretching + e.bending + e.bonding;
  return e;
}

}  // namespace film
