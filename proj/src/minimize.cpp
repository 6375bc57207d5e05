#include "film/minimize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "film/admissibility.hpp"
#include "film/errors.hpp"
#include "film/parallel.hpp"
#include "film/stencils.hpp"

namespace film {

void MinimizeOptions::validate() const
{
  if (max_iterations < 0)
    throw DomainError("max_iterations must be >= 0");
  if (!(tolerance > 0.0) || !(step > 0.0) || !(min_step > 0.0) || !(armijo > 0.0) || !(armijo < 1.0))
    throw DomainError("minimizer tolerance, step, min_step must be positive and armijo in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw DomainError("backtracking factor must lie in (0, 1)");
  if (patience < 1)
    throw DomainError("patience must be >= 1");
}

std::string to_string(MinimizeStatus s)
{
  switch (s) {
  case MinimizeStatus::converged: return "converged";
  case MinimizeStatus::iteration_cap: return "iteration_cap";
  case MinimizeStatus::no_descent: return "no_descent";
  case MinimizeStatus::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

bool clamped(const DisplacementField& f) { return f.grid.x0 == 0.0; }

void zero_clamped(const DisplacementField& f, FieldGradient& g)
{
  if (!clamped(f))
    return;
  g.u.row(0).setZero();
  g.v.row(0).setZero();
  g.w.topRows(std::min<Eigen::Index>(kClampedWColumns, f.grid.nx)).setZero();
}

}  // namespace

// Adjoint of evaluate_energy.  Each row i scatters into rows i-3 .. i+3, so
// rows are processed in 8 interleaved colours; within a colour the writes are
// disjoint and the summation order is fixed.
FieldGradient discrete_gradient(const DisplacementField& f)
{
  validate_field(f);
  using Eigen::Index;
  const Index nx = f.grid.nx, ny = f.grid.ny;
  if (nx < 4 || ny < 4)
    throw DomainError("gradient needs at least 4 x 4 samples");
  const double hx = f.grid.hx(), hy = f.grid.hy();
  const bool analytic = f.support_kind == SupportKind::analytic;
  const Mask mask = bonding_mask(f);
  const double B = f.params.bending_prefactor();
  auto tx = [&](Index i) { return (i == 0 || i == nx - 1) ? hx / 2 : hx; };
  auto ty = [&](Index j) { return (j == 0 || j == ny - 1) ? hy / 2 : hy; };

  FieldGradient g{Array2<double>::Zero(nx, ny), Array2<double>::Zero(nx, ny), Array2<double>::Zero(nx, ny)};
  const auto& u = f.u;
  const auto& v = f.v;
  const auto& w = f.w;

  auto row = [&](Index i) {
    // y-edges: (2 v_y + w_y^2 - 1)^2
    for (Index j = 0; j + 1 < ny; ++j) {
      const double vy = (v(i, j + 1) - v(i, j)) / hy, wy = (w(i, j + 1) - w(i, j)) / hy;
      const double c = 2.0 * tx(i) * hy * (2.0 * vy + wy * wy - 1.0);
      g.v(i, j + 1) += c * 2.0 / hy;
      g.v(i, j) -= c * 2.0 / hy;
      g.w(i, j + 1) += c * 2.0 * wy / hy;
      g.w(i, j) -= c * 2.0 * wy / hy;
    }
    if (i + 1 < nx) {
      // x-edges: (2 u_x + w_x^2 - 1)^2
      for (Index j = 0; j < ny; ++j) {
        const double ux = (u(i + 1, j) - u(i, j)) / hx, wx = (w(i + 1, j) - w(i, j)) / hx;
        const double c = 2.0 * hx * ty(j) * (2.0 * ux + wx * wx - 1.0);
        g.u(i + 1, j) += c * 2.0 / hx;
        g.u(i, j) -= c * 2.0 / hx;
        g.w(i + 1, j) += c * 2.0 * wx / hx;
        g.w(i, j) -= c * 2.0 * wx / hx;
      }
      // cell centres: 2 (u_y + v_x + w_x w_y)^2
      for (Index j = 0; j + 1 < ny; ++j) {
        const double uy = ((u(i, j + 1) - u(i, j)) + (u(i + 1, j + 1) - u(i + 1, j))) / (2 * hy);
        const double vx = ((v(i + 1, j) - v(i, j)) + (v(i + 1, j + 1) - v(i, j + 1))) / (2 * hx);
        const double wx = ((w(i + 1, j) - w(i, j)) + (w(i + 1, j + 1) - w(i, j + 1))) / (2 * hx);
        const double wy = ((w(i, j + 1) - w(i, j)) + (w(i + 1, j + 1) - w(i + 1, j))) / (2 * hy);
        const double c = 4.0 * hx * hy * (uy + vx + wx * wy);
        const double ay = c / (2 * hy), ax = c / (2 * hx);
        g.u(i, j + 1) += ay;
        g.u(i + 1, j + 1) += ay;
        g.u(i, j) -= ay;
        g.u(i + 1, j) -= ay;
        g.v(i + 1, j) += ax;
        g.v(i + 1, j + 1) += ax;
        g.v(i, j) -= ax;
        g.v(i, j + 1) -= ax;
        const double px = c * wy / (2 * hx), py = c * wx / (2 * hy);
        g.w(i + 1, j) += px - py;
        g.w(i + 1, j + 1) += px + py;
        g.w(i, j) += -px - py;
        g.w(i, j + 1) += -px + py;
      }
    }
    // bending
    const stencil::Taps sx = stencil::second(nx, i), dx = stencil::first(nx, i);
    const bool x_interior = i > 0 && i + 1 < nx;
    for (Index j = 0; j < ny; ++j) {
      const stencil::Taps sy = stencil::second(ny, j), dy = stencil::first(ny, j);
      double wxx = 0.0, wyy = 0.0, wxy = 0.0;
      for (int m = 0; m < sx.count; ++m)
        wxx += sx.c[m] * w(sx.start + m, j);
      wxx /= hx * hx;
      for (int m = 0; m < sy.count; ++m)
        wyy += sy.c[m] * w(i, sy.start + m);
      wyy /= hy * hy;
      for (int m = 0; m < dx.count; ++m)
        for (int n = 0; n < dy.count; ++n)
          wxy += dx.c[m] * dy.c[n] * w(dx.start + m, dy.start + n);
      wxy /= hx * hy;
      double cxx = 1.0, cyy = 1.0;
      if (analytic && !mask(i, j)) {
        if (x_interior && mask(i - 1, j) != mask(i + 1, j))
          cxx = 2.0;
        if (j > 0 && j + 1 < ny && mask(i, j - 1) != mask(i, j + 1))
          cyy = 2.0;
      }
      const double q = B * tx(i) * ty(j);
      const double gxx = q * 2.0 * cxx * wxx / (hx * hx), gyy = q * 2.0 * cyy * wyy / (hy * hy);
      const double gxy = q * 4.0 * wxy / (hx * hy);
      for (int m = 0; m < sx.count; ++m)
        g.w(sx.start + m, j) += gxx * sx.c[m];
      for (int m = 0; m < sy.count; ++m)
        g.w(i, sy.start + m) += gyy * sy.c[m];
      for (int m = 0; m < dx.count; ++m)
        for (int n = 0; n < dy.count; ++n)
          g.w(dx.start + m, dy.start + n) += gxy * dx.c[m] * dy.c[n];
    }
  };

  constexpr Index colours = 8;
  for (Index c = 0; c < colours; ++c) {
    const Index count = c < nx ? (nx - 1 - c) / colours + 1 : 0;
    parallel_for(count, [&](std::ptrdiff_t k) { row(c + colours * k); });
  }
  zero_clamped(f, g);
  return g;
}

namespace {

std::string num(double v)
{
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Projection onto the constraint set: w >= 0 and the clamped band.
void project(DisplacementField& f, const DisplacementField& anchor, bool positivity)
{
  if (positivity)
    f.w = f.w.max(0.0);
  if (clamped(f)) {
    f.u.row(0).setZero();
    f.v.row(0).setZero();
    const auto k = std::min<Eigen::Index>(kClampedWColumns, f.grid.nx);
    f.w.topRows(k) = anchor.w.topRows(k);
  }
  f.refresh_threshold_support();
}

}  // namespace

MinimizeResult minimize(const DisplacementField& field0, const MinimizeOptions& opts)
{
  opts.validate();
  validate_field(field0);

  // Anchor for the clamped band: the seed with the clamping values imposed.
  DisplacementField anchor = field0;
  if (clamped(anchor)) {
    anchor.w.row(0).setConstant(anchor.edge_height);
    if (opts.project)
      anchor.w = anchor.w.max(0.0);
  }
  DisplacementField x = field0;
  project(x, anchor, opts.project);
  if (opts.project) {
    const auto rep = check_admissible(x);
    if (!rep.ok())
      throw DomainError("seed is not admissible after projection:\n" + rep.summary());
  }

  MinimizeResult res;
  EnergyBreakdown e = evaluate_energy(x);
  res.log.push_back({0, e, 0.0});
  double step = opts.step;
  int small = 0;
  res.status = MinimizeStatus::iteration_cap;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const FieldGradient g = discrete_gradient(x);
    const double gnorm2 = g.u.square().sum() + g.v.square().sum() + g.w.square().sum();
    if (!std::isfinite(gnorm2))
      throw NumericalError("non-finite gradient at iteration " + std::to_string(it));
    if (gnorm2 == 0.0) {
      res.status = MinimizeStatus::converged;
      res.diagnostic = "zero gradient";
      break;
    }
    // Second candidate per step size keeps bonded nodes down: lifting a node
    // off the substrate costs gamma times its area, which a short step never
    // recovers.
    FieldGradient gb = g;
    {
      const double tau = x.support_threshold();
      for (Eigen::Index i = 0; i < x.grid.nx; ++i)
        for (Eigen::Index j = 0; j < x.grid.ny; ++j)
          if (x.w(i, j) <= tau && gb.w(i, j) < 0.0)
            gb.w(i, j) = 0.0;
    }
    bool accepted = false;
    DisplacementField trial;
    EnergyBreakdown et;
    for (double s = step; s >= opts.min_step && !accepted; s *= opts.backtrack) {
      for (const FieldGradient* d : {&g, static_cast<const FieldGradient*>(&gb)}) {
        trial = x;
        trial.u -= s * d->u;
        trial.v -= s * d->v;
        trial.w -= s * d->w;
        project(trial, anchor, opts.project);
        if (!trial.u.allFinite() || !trial.v.allFinite() || !trial.w.allFinite())
          continue;
        // Armijo along the projected path: E(x+) <= E(x) + c <g, x+ - x>.
        const double slope = (g.u * (trial.u - x.u)).sum() + (g.v * (trial.v - x.v)).sum() +
                             (g.w * (trial.w - x.w)).sum();
        et = evaluate_energy(trial);
        if (et.total <= e.total + opts.armijo * slope && et.total <= e.total &&
            (!opts.project || check_admissible(trial).ok())) {
          accepted = true;
          step = s;
          break;
        }
      }
    }
    if (!accepted) {
      res.status = it == 1 ? MinimizeStatus::no_descent : MinimizeStatus::stalled;
      res.diagnostic = "no descent step above min_step " + num(opts.min_step) + " at iteration " + std::to_string(it);
      break;
    }
    const double rel = (e.total - et.total) / std::max(std::abs(e.total), 1e-300);
    x = std::move(trial);
    e = et;
    res.log.push_back({it, e, step});
    step = std::min(step / opts.backtrack, 1e6 * opts.step);
    small = rel < opts.tolerance ? small + 1 : 0;
    if (small >= opts.patience) {
      res.status = MinimizeStatus::converged;
      res.diagnostic = "relative decrease below tolerance for " + std::to_string(opts.patience) + " iterations";
      break;
    }
  }
  if (res.status == MinimizeStatus::no_descent) {
    res.field = field0;
    return res;
  }
  res.field = std::move(x);
  return res;
}

std::string iteration_csv(const std::vector<IterationRecord>& log)
{
  std::ostringstream os;
  os << "iteration,stretching,bending,bonding,total,step\n";
  for (const auto& r : log)
    os << r.iteration << ',' << num(r.energy.stretching) << ',' << num(r.energy.bending) << ','
       << num(r.energy.bonding) << ',' << num(r.energy.total) << ',' << num(r.step) << '\n';
  return os.str();
}

}  // namespace film
