#include "film/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "film/errors.hpp"
#include "film/regimes.hpp"

namespace film {

std::string to_string(ConstructionKind k)
{
  switch (k) {
  case ConstructionKind::flat: return "flat";
  case ConstructionKind::laminate: return "laminate";
  case ConstructionKind::branching: return "branching";
  }
  return "unknown";
}

ConstructionKind construction_from_string(const std::string& s)
{
  if (s == "flat")
    return ConstructionKind::flat;
  if (s == "laminate")
    return ConstructionKind::laminate;
  if (s == "branching")
    return ConstructionKind::branching;
  throw DomainError("unknown construction '" + s + "' (expected flat, laminate or branching)");
}

std::optional<std::string> unavailable(ConstructionKind k, const Params& p)
{
  p.validate();
  switch (k) {
  case ConstructionKind::flat: return std::nullopt;
  case ConstructionKind::laminate:
    if (p.sigma * p.gamma > 1.0)
      return "sigma*gamma > 1: laminate needs sigma*gamma <= 1";
    if (p.gamma < 1.0)
      return "gamma < 1: laminate needs gamma >= 1";
    return std::nullopt;
  case ConstructionKind::branching:
    if (p.gamma > power(p.sigma, {-4, 9}))
      return "gamma > sigma^{-4/9}: branching needs gamma <= sigma^{-4/9}";
    return std::nullopt;
  }
  return std::nullopt;
}

double balanced_delta_factor(ProfileKind k)
{
  const BumpProfile& psi = profile(k);
  // int_{-1}^{1} psi''^2 by two-point Gauss panels, which never touch the
  // ends where psi'' may jump to zero; the cosine value is pi^4 / 4.
  const int n = 2000;
  const double hw = 1.0 / n, off = hw / std::sqrt(3.0);
  double j = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mid = -1.0 + (2 * i + 1) * hw;
    const double a = psi.d2(mid - off), b = psi.d2(mid + off);
    j += a * a + b * b;
  }
  j *= hw;
  return std::cbrt(j / psi.c_star());
}

LaminateScales laminate_scales(const Params& p, const Overrides& o)
{
  p.validate();
  LaminateScales s;
  if (!(o.h && o.delta && o.eps)) {
    if (auto why = unavailable(ConstructionKind::laminate, p))
      throw DomainError(*why);
    s.h = p.l1 * power(p.sigma * p.gamma, {2, 5});
    s.delta = p.l1 * power(p.sigma, {4, 5}) * power(p.gamma, {-1, 5});
    s.eps = s.h;
  }
  if (o.delta_factor) {
    if (!(*o.delta_factor > 0.0))
      throw DomainError("delta factor must be positive");
    s.delta *= *o.delta_factor;
  }
  if (o.h)
    s.h = *o.h;
  if (o.delta)
    s.delta = *o.delta;
  if (o.eps)
    s.eps = *o.eps;
  if (!(s.h > 0.0) || !(s.delta > 0.0) || !(s.eps > 0.0))
    throw DomainError("laminate scales h, delta, eps must be positive");
  if (s.delta > s.h)
    throw DomainError("delta > h: laminate needs delta <= h");
  if (s.delta > s.eps)
    throw DomainError("delta > eps: boundary layer needs delta <= eps");
  if (s.h > p.l2)
    throw DomainError("h > l2: laminate needs h <= l2");
  if (s.eps > p.l1)
    throw DomainError("eps > l1: boundary layer must fit in the domain");
  return s;
}

Layout flat_layout(const Params& p)
{
  p.validate();
  Layout l;
  l.params = p;
  l.height = p.l2;
  l.bands.push_back({"flat", 0.0, p.l1, 0.0, FlatShape{}});
  return l;
}

Layout laminate_layout(const Params& p, const LaminateScales& s)
{
  p.validate();
  Layout l;
  l.params = p;
  l.height = p.l2;
  l.bands.push_back({"boundary_layer", 0.0, s.eps, 0.0, BoundaryLayerShape{s.eps, s.h, s.delta, ProfileKind::cosine}});
  l.bands.push_back({"bulk", s.eps, p.l1, 0.0, LaminateShape{s.h, s.delta, ProfileKind::cosine}});
  l.restrict_to_domain();
  return l;
}

Layout branching_layout(const Params& p, const BranchSchedule& b)
{
  p.validate();
  Layout l;
  l.params = p;
  l.height = p.l2;
  const auto n = static_cast<std::size_t>(b.N);
  l.bands.push_back(
      {"boundary_layer", 0.0, b.eps, 0.0, BoundaryLayerShape{b.eps, b.h[n], b.delta[n], ProfileKind::bump}});
  double x = b.eps;
  for (int i = b.N - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    const double L = b.L[k];
    const std::string tag = std::to_string(i);
    l.bands.push_back({"split_" + tag, x, x + L, 0.0, FoldSplitShape{b.h[k], b.delta[k + 1], L}});
    l.bands.push_back(
        {"shrink_" + tag, x + L, x + 2.0 * L, 0.0, FoldShrinkShape{b.h[k], b.delta[k], b.delta[k + 1] / b.delta[k], L}});
    x += 2.0 * L;
  }
  l.bands.push_back({"bulk", x, x + p.l1, 0.0, LaminateShape{b.h[0], b.delta[0], ProfileKind::bump}});
  l.restrict_to_domain();
  return l;
}

Construction make_construction(ConstructionKind k, const Params& p, const Overrides& o)
{
  Construction c;
  c.kind = k;
  switch (k) {
  case ConstructionKind::flat: c.layout = flat_layout(p); break;
  case ConstructionKind::laminate:
    c.laminate = laminate_scales(p, o);
    c.layout = laminate_layout(p, *c.laminate);
    break;
  case ConstructionKind::branching:
    c.schedule = branch_schedule(p, o.levels);
    c.layout = branching_layout(p, *c.schedule);
    break;
  }
  return c;
}

double lift_width(const Params& p, double h_b)
{
  return std::sqrt(p.sigma * p.l1 * h_b) * std::pow(std::max(1.0, p.gamma), -0.25);
}

Layout buffer_lift(const Layout& inner, double h_b)
{
  const Params& p = inner.params;
  p.validate();
  const double limit = std::min(p.sigma, p.gamma > 0.0 ? 1.0 / (p.sigma * std::pow(p.gamma, 1.5))
                                                       : std::numeric_limits<double>::infinity());
  if (!(h_b >= 0.0) || h_b / p.l1 > limit)
    throw DomainError("h_b out of range: lift needs 0 <= h_b/l1 <= min(sigma, sigma^-1 gamma^-3/2) = " +
                      std::to_string(limit));
  if (h_b == 0.0)
    return inner;
  const double eta = lift_width(p, h_b);
  Layout out = inner;
  out.edge_height = h_b;
  out.bands.clear();
  out.bands.push_back({"lift", 0.0, eta, 0.0, LiftShape{h_b, eta}});
  for (auto b : inner.bands) {
    b.x_begin += eta;
    b.x_end += eta;
    out.bands.push_back(b);
  }
  out.restrict_to_domain();
  return out;
}

Construction buffer_lift(const Construction& inner, double h_b)
{
  Construction c = inner;
  c.layout = buffer_lift(inner.layout, h_b);
  c.lift_height = h_b;
  c.lift_width = h_b > 0.0 ? lift_width(inner.layout.params, h_b) : 0.0;
  return c;
}

void require_resolution(const Construction& c, const Grid& grid)
{
  if (c.kind != ConstructionKind::branching)
    return;
  const double d = finest_width(c.layout);
  if (d > 0.0 && grid.hy() > d / 8.0 * (1.0 + 1e-12))
    throw DomainError("grid under-resolves the finest fold: hy = " + std::to_string(grid.hy()) +
                      " > delta_N/8 = " + std::to_string(d / 8.0));
  if (c.schedule && grid.hx() > c.schedule->eps / 4.0 * (1.0 + 1e-12))
    throw DomainError("grid under-resolves the boundary layer: hx = " + std::to_string(grid.hx()) +
                      " > eps/4 = " + std::to_string(c.schedule->eps / 4.0));
}

DisplacementField flat_construction(const Params& p, const Grid& grid)
{
  return rasterize(flat_layout(p), grid);
}

DisplacementField laminate_full(const Params& p, const Grid& grid, const Overrides& o)
{
  return rasterize(make_construction(ConstructionKind::laminate, p, o).layout, grid);
}

DisplacementField branching_full(const Params& p, const Grid& grid, const Overrides& o)
{
  const auto c = make_construction(ConstructionKind::branching, p, o);
  require_resolution(c, grid);
  return rasterize(c.layout, grid);
}

DisplacementField buffer_lift(const Layout& inner, const Grid& grid, double h_b)
{
  return rasterize(buffer_lift(inner, h_b), grid);
}

namespace {

constexpr ConstructionKind kOrder[] = {ConstructionKind::flat, ConstructionKind::laminate, ConstructionKind::branching};

}  // namespace

Selection best_construction(const Params& p, const ResolutionPolicy& policy)
{
  p.validate();
  Selection best;
  bool have = false;
  for (auto k : kOrder) {
    CandidateResult r;
    r.kind = k;
    if (auto why = unavailable(k, p)) {
      r.skipped = *why;
      best.candidates.push_back(r);
      continue;
    }
    auto c = make_construction(k, p);
    auto e = tiled_energy(c.layout, policy);
    r.total = e.energy.total;
    best.candidates.push_back(r);
    if (!have || e.energy.total < best.energy.energy.total) {
      best.construction = std::move(c);
      best.energy = std::move(e);
      have = true;
    }
  }
  return best;
}

FieldSelection best_construction(const Params& p, const Grid& grid)
{
  p.validate();
  grid.validate();
  std::optional<FieldSelection> best;
  std::vector<CandidateResult> results;
  for (auto k : kOrder) {
    CandidateResult r;
    r.kind = k;
    if (auto why = unavailable(k, p)) {
      r.skipped = *why;
      results.push_back(r);
      continue;
    }
    auto c = make_construction(k, p);
    try {
      require_resolution(c, grid);
    } catch (const DomainError& e) {
      r.skipped = e.what();
      results.push_back(r);
      continue;
    }
    auto f = rasterize(c.layout, grid);
    const auto e = evaluate_energy(f);
    r.total = e.total;
    results.push_back(r);
    if (!best || e.total < best->energy.total)
      best = FieldSelection{std::move(c), std::move(f), e, {}};
  }
  best->candidates = std::move(results);
  return std::move(*best);
}

}  // namespace film
