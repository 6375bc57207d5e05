#pragma once

// Per-column evaluation of the analytic fold profiles shared by the cell
// operations and the band rasterizer.

#include <cmath>

#include "film/cells.hpp"
#include "film/layout.hpp"

namespace film::detail {

struct ColumnSampler {
  double factor = 0.0;  // boundary-layer interpolant, 1 elsewhere
  double amp = 0.0;
  double width = 1.0;
  double c0 = 0.0, c1 = 0.0;  // fold centers
  bool pair = false;
  const BumpProfile* psi = nullptr;
  // x-derivatives of amp, c1 (c0 moves with -c1_x when pair) and width
  double amp_x = 0.0, c1_x = 0.0, width_x = 0.0;

  double w(double t, bool& inside) const
  {
    const double a = (t - c0) / width, b = (t - c1) / width;
    inside = factor > 0.0 && (std::abs(a) < 1.0 || (pair && std::abs(b) < 1.0));
    if (!inside)
      return 0.0;
    const double s = pair ? psi->value(a) + psi->value(b) : psi->value(a);
    return factor * amp * s;
  }

  double wx(double t) const
  {
    const double a = (t - c0) / width, b = (t - c1) / width;
    double s = 0.0, sx = 0.0;
    if (std::abs(a) < 1.0) {
      s += psi->value(a);
      sx += psi->d1(a) * ((pair ? c1_x : 0.0) - a * width_x) / width;
    }
    if (pair && std::abs(b) < 1.0) {
      s += psi->value(b);
      sx += psi->d1(b) * (-c1_x - b * width_x) / width;
    }
    return factor * (amp_x * s + amp * sx);
  }
};

inline ColumnSampler laminate_sampler(double h, double delta, ProfileKind kind, double factor = 1.0)
{
  ColumnSampler s;
  s.psi = &profile(kind);
  s.factor = factor;
  s.amp = std::sqrt(delta * h / s.psi->c_star());
  s.width = delta;
  return s;
}

inline ColumnSampler split_sampler(const FoldSplitShape& c, double xl)
{
  ColumnSampler s;
  s.psi = &profile(ProfileKind::bump);
  s.factor = 1.0;
  const double phi = split_offset(xl, c.h, c.length);
  const double phi_x = -0.5 * c.h * plateau_ramp_d1(xl, c.length);
  const auto a = split_amplitude_slope(phi, c.h, c.delta, *s.psi);
  s.amp = a.value;
  s.amp_x = a.dphi * phi_x;
  s.width = c.delta;
  s.c0 = -phi;
  s.c1 = phi;
  s.c1_x = phi_x;
  s.pair = true;
  return s;
}

inline ColumnSampler shrink_sampler(const FoldShrinkShape& c, double xl)
{
  ColumnSampler s;
  s.psi = &profile(ProfileKind::bump);
  s.factor = 1.0;
  s.width = shrink_width(xl, c.delta, c.lambda, c.length);
  s.width_x = (1.0 - c.lambda) * c.delta * plateau_ramp_d1(xl, c.length);
  s.amp = std::sqrt(s.width * c.h / s.psi->c_star());
  s.amp_x = 0.5 * s.amp * s.width_x / s.width;
  return s;
}

// Rescales one copy's samples w (and w_x when given) on [-h, h] so that the
// staggered sum  sum dt (1 - (dw/dt)^2)  vanishes exactly; the discrete v then
// closes at v(h) = 0 for every x instead of carrying a grid-aliased defect.
inline void normalize_copy(const double* t, Eigen::Index m, double h, double* w, double* wx)
{
  double tp = -h, wp = 0.0, wxp = 0.0, S = 0.0, Sx = 0.0;
  const double tiny = 1e-12 * h;
  auto add = [&](double tk, double wk, double wxk) {
    const double dt = tk - tp;
    if (dt > tiny) {
      const double d = (wk - wp) / dt, dx = (wxk - wxp) / dt;
      S += dt * d * d;
      Sx += 2.0 * dt * d * dx;
      tp = tk;
    }
    wp = wk;
    wxp = wxk;
  };
  for (Eigen::Index k = 0; k < m; ++k)
    add(t[k], w[k], wx ? wx[k] : 0.0);
  add(h, 0.0, 0.0);
  if (!(S > 0.0))
    return;
  const double k = std::sqrt(2.0 * h / S);
  const double kx = -0.5 * k * Sx / S;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (wx)
      wx[j] = k * wx[j] + kx * w[j];
    w[j] *= k;
  }
}

// x-derivative of row-major samples f(c, j) over consecutive columns with
// spacing hx: centered inside, second-order one-sided at both ends.
inline void column_derivative(const Array2<double>& f, double hx, Array2<double>& out)
{
  const auto nc = f.rows();
  out.resize(f.rows(), f.cols());
  if (nc == 1) {
    out.setZero();
    return;
  }
  if (nc == 2) {
    out.row(0) = (f.row(1) - f.row(0)) / hx;
    out.row(1) = out.row(0);
    return;
  }
  for (Eigen::Index c = 1; c + 1 < nc; ++c)
    out.row(c) = (f.row(c + 1) - f.row(c - 1)) / (2.0 * hx);
  out.row(0) = (-1.5 * f.row(0) + 2.0 * f.row(1) - 0.5 * f.row(2)) / hx;
  out.row(nc - 1) = (1.5 * f.row(nc - 1) - 2.0 * f.row(nc - 2) + 0.5 * f.row(nc - 3)) / hx;
}

}  // namespace film::detail
