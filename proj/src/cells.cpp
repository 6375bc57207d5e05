#include "film/cells.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "film/errors.hpp"
#include "film/layout.hpp"
#include "film/parallel.hpp"
#include "sampling.hpp"

namespace film {

namespace {

constexpr double kPi = std::numbers::pi;

void require_local_y(const Grid& g, double h, const char* what)
{
  if (std::abs(g.y0 + h) > 1e-12 * h || std::abs(g.ly - 2.0 * h) > 1e-12 * h)
    throw DomainError(std::string(what) + ": grid must span y in [-h, h]");
}

std::vector<double> local_t(const Grid& g, double h)
{
  std::vector<double> t(static_cast<std::size_t>(g.ny));
  for (Eigen::Index j = 0; j < g.ny; ++j)
    t[static_cast<std::size_t>(j)] = std::clamp(g.y(j) - g.y0 - h, -h, h);
  return t;
}

}  // namespace

void LaminateCellSpec::validate() const
{
  if (!(h > 0.0 && delta > 0.0 && l > 0.0))
    throw DomainError("laminate cell needs h, delta, l > 0");
  if (delta > h * (1.0 + 1e-12))
    throw DomainError("laminate cell needs delta <= h");
}

double LaminateCellSpec::amplitude() const { return std::sqrt(delta * h / film::profile(profile).c_star()); }

double cosine_laminate_v(double y, double h, double delta, double amplitude)
{
  if (y < -delta)
    return 0.5 * (y + h);
  if (y > delta)
    return 0.5 * (y - h);
  const double k = amplitude * amplitude * kPi * kPi / (16.0 * delta * delta);
  return 0.5 * y - k * (y - delta / (2.0 * kPi) * std::sin(2.0 * kPi * y / delta));
}

DisplacementField laminate_cell(const LaminateCellSpec& spec, const Params& params, const Grid& grid)
{
  spec.validate();
  grid.validate();
  require_local_y(grid, spec.h, "laminate_cell");
  DisplacementField f(grid, params);
  f.support_kind = SupportKind::analytic;
  const auto t = local_t(grid, spec.h);
  const auto s = detail::laminate_sampler(spec.h, spec.delta, spec.profile);
  std::vector<double> w(t.size()), v(t.size());
  std::vector<std::uint8_t> m(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    bool inside = false;
    w[j] = s.w(t[j], inside);
    m[j] = inside;
  }
  if (spec.profile == ProfileKind::cosine) {
    for (std::size_t j = 0; j < t.size(); ++j)
      v[j] = cosine_laminate_v(t[j], spec.h, spec.delta, s.amp);
  } else {
    detail::normalize_copy(t.data(), grid.ny, spec.h, w.data(), nullptr);
    detail::integrate_v(t.data(), w.data(), grid.ny, spec.h, v.data());
  }
  for (Eigen::Index i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (Eigen::Index j = 0; j < grid.ny; ++j) {
      f.u(i, j) = 0.5 * x + spec.d;
      f.v(i, j) = v[static_cast<std::size_t>(j)];
      f.w(i, j) = w[static_cast<std::size_t>(j)];
      f.support(i, j) = m[static_cast<std::size_t>(j)];
    }
  }
  return f;
}

DisplacementField laminate_boundary_layer(double eps, double h, double delta, const Params& params, const Grid& grid,
                                          ProfileKind kind)
{
  if (!(delta > 0.0) || delta > eps)
    throw DomainError("boundary layer needs 0 < delta <= eps");
  if (delta > h || h > params.l2)
    throw DomainError("boundary layer needs delta <= h <= l2");
  Layout layout;
  layout.params = params;
  layout.height = params.l2;
  layout.bands.push_back({"boundary_layer", 0.0, eps, 0.0, BoundaryLayerShape{eps, h, delta, kind}});
  return rasterize(layout, grid);
}

namespace detail {

void integrate_v(const double* t, const double* w, Eigen::Index m, double h, double* v)
{
  double tp = -h, wp = 0.0, vp = 0.0;
  const double tiny = 1e-12 * h;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double dt = t[k] - tp;
    if (dt > tiny) {
      const double d = (w[k] - wp) / dt;
      vp += 0.5 * dt * (1.0 - d * d);
      tp = t[k];
    }
    wp = w[k];
    v[k] = vp;
  }
}

void integrate_vx(const double* t, const double* w, const double* wx, Eigen::Index m, double h, double* vx)
{
  double tp = -h, wp = 0.0, wxp = 0.0, vp = 0.0;
  const double tiny = 1e-12 * h;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double dt = t[k] - tp;
    if (dt > tiny) {
      vp -= (w[k] - wp) / dt * (wx[k] - wxp);
      tp = t[k];
    }
    wp = w[k];
    wxp = wx[k];
    vx[k] = vp;
  }
}

void integrate_u(const double* t, const double* w, const double* wx, const double* vx, Eigen::Index m, double h,
                 double u_edge, double* u)
{
  double tp = -h, wp = 0.0, up = u_edge, wxp = 0.0, vxp = 0.0;
  const double tiny = 1e-12 * h;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double wxk = wx ? wx[k] : 0.0, vxk = vx ? vx[k] : 0.0;
    const double dt = t[k] - tp;
    if (dt > tiny) {
      const double d = (w[k] - wp) / dt;
      up -= dt * (0.5 * (wxp + wxk) * d + 0.5 * (vxp + vxk));
      tp = t[k];
    }
    wp = w[k];
    wxp = wxk;
    vxp = vxk;
    u[k] = up;
  }
}

}  // namespace detail

InPlane uv_from_w(const Array2<double>& w, const Grid& grid, double h, double tol, const Array2<double>* wx_exact)
{
  grid.validate();
  if (w.rows() != grid.nx || w.cols() != grid.ny)
    throw DomainError("uv_from_w: samples do not match the grid");
  require_local_y(grid, h, "uv_from_w");
  const auto t = local_t(grid, h);
  InPlane out{Array2<double>(grid.nx, grid.ny), Array2<double>(grid.nx, grid.ny)};
  for (Eigen::Index i = 0; i < grid.nx; ++i) {
    detail::integrate_v(t.data(), &w(i, 0), grid.ny, h, &out.v(i, 0));
    // int_{-h}^{h} (1 - w_y^2) = 2 v(h); evenness makes this twice the half-cell integral.
    const double rel = std::abs(out.v(i, grid.ny - 1)) / h;
    if (rel > tol)
      throw DomainError("uv_from_w: normalization int_0^h (1 - w_y^2) = 0 violated at column " + std::to_string(i) +
                        " (relative " + std::to_string(rel) + ")");
  }
  Array2<double> wx, vx;
  if (wx_exact) {
    if (wx_exact->rows() != grid.nx || wx_exact->cols() != grid.ny)
      throw DomainError("uv_from_w: w_x samples do not match the grid");
    wx = *wx_exact;
    vx.resize(grid.nx, grid.ny);
    for (Eigen::Index i = 0; i < grid.nx; ++i)
      detail::integrate_vx(t.data(), &w(i, 0), &wx(i, 0), grid.ny, h, &vx(i, 0));
  } else {
    detail::column_derivative(w, grid.hx(), wx);
    detail::column_derivative(out.v, grid.hx(), vx);
  }
  for (Eigen::Index i = 0; i < grid.nx; ++i)
    detail::integrate_u(t.data(), &w(i, 0), &wx(i, 0), &vx(i, 0), grid.ny, h, 0.5 * grid.x(i), &out.u(i, 0));
  return out;
}

double split_offset(double x, double h, double length) { return 0.5 * h * (1.0 - plateau_ramp(x, length)); }

AmplitudeSlope split_amplitude_slope(double phi, double h, double delta, const BumpProfile& psi)
{
  // I(phi) = int_0^top q^2 with q = wt_y; the integrand vanishes at top, so
  // dI/dphi = int 2 q dq/dphi.
  const double top = std::min(h, phi + delta);
  const long n = std::max<long>(64, static_cast<long>(std::ceil(128.0 * top / delta)));
  const double dy = top / static_cast<double>(n);
  double s = 0.0, sd = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double y = dy * static_cast<double>(k);
    const double a = (y + phi) / delta, b = (y - phi) / delta;
    const double q = (psi.d1(a) + psi.d1(b)) / delta;
    const double qd = (psi.d2(a) - psi.d2(b)) / (delta * delta);
    const double wgt = k == 0 || k == n ? 0.5 : 1.0;
    s += wgt * q * q;
    sd += wgt * 2.0 * q * qd;
  }
  const double integral = s * dy;
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw NumericalError("fold amplitude quadrature failed");
  AmplitudeSlope r;
  r.value = std::sqrt(h / integral);
  r.dphi = -0.5 * r.value * sd * dy / integral;
  return r;
}

double split_amplitude(double phi, double h, double delta, const BumpProfile& psi)
{
  return split_amplitude_slope(phi, h, delta, psi).value;
}

double shrink_width(double x, double delta, double lambda, double length)
{
  return lambda * delta + (1.0 - lambda) * delta * plateau_ramp(x, length);
}

namespace {

template <typename Sampler>
DisplacementField fold_cell(double h, const Params& params, const Grid& grid, Sampler&& make)
{
  grid.validate();
  require_local_y(grid, h, "fold cell");
  DisplacementField f(grid, params);
  f.support_kind = SupportKind::analytic;
  const auto t = local_t(grid, h);
  Array2<double> wx(grid.nx, grid.ny);
  parallel_for(grid.nx, [&](std::ptrdiff_t i) {
    const auto s = make(grid.x(i) - grid.x0);
    for (Eigen::Index j = 0; j < grid.ny; ++j) {
      bool inside = false;
      const double tj = t[static_cast<std::size_t>(j)];
      f.w(i, j) = s.w(tj, inside);
      f.support(i, j) = inside;
      wx(i, j) = inside ? s.wx(tj) : 0.0;
    }
    detail::normalize_copy(t.data(), grid.ny, h, &f.w(i, 0), &wx(i, 0));
  });
  auto uv = uv_from_w(f.w, grid, h, kNormalizationTol, &wx);
  f.u = std::move(uv.u);
  f.v = std::move(uv.v);
  return f;
}

}  // namespace

DisplacementField fold_split_cell(double h, double delta, double length, const BumpProfile& psi, const Params& params,
                                  const Grid& grid)
{
  if (!(delta > 0.0) || delta > 0.5 * h * (1.0 + 1e-12))
    throw DomainError("fold split needs 0 < delta <= h/2");
  if (h > length * (1.0 + 1e-12))
    throw DomainError("fold split needs h <= L");
  if (psi.kind() != ProfileKind::bump)
    throw DomainError("fold cells use the smooth bump profile");
  const FoldSplitShape shape{h, delta, length};
  return fold_cell(h, params, grid, [&](double xl) { return detail::split_sampler(shape, xl); });
}

DisplacementField fold_shrink_cell(double h, double delta, double lambda, double length, const BumpProfile& psi,
                                   const Params& params, const Grid& grid)
{
  if (!(lambda >= 0.25 && lambda <= 1.0))
    throw DomainError("fold shrink needs lambda in [1/4, 1]");
  if (!(delta > 0.0) || delta > h * (1.0 + 1e-12))
    throw DomainError("fold shrink needs 0 < delta <= h");
  if (h > length * (1.0 + 1e-12))
    throw DomainError("fold shrink needs h <= L");
  if (psi.kind() != ProfileKind::bump)
    throw DomainError("fold cells use the smooth bump profile");
  const FoldShrinkShape shape{h, delta, lambda, length};
  return fold_cell(h, params, grid, [&](double xl) { return detail::shrink_sampler(shape, xl); });
}

}  // namespace film
