#include "film/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "film/errors.hpp"
#include "film/parallel.hpp"

namespace film {

namespace {

std::string num(double v)
{
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string point_tag(const Params& p) { return "sigma=" + num(p.sigma) + ", gamma=" + num(p.gamma); }

}  // namespace

std::string to_string(SweepAxis a)
{
  switch (a) {
  case SweepAxis::sigma: return "sigma";
  case SweepAxis::gamma: return "gamma";
  case SweepAxis::curve: return "curve";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s)
{
  if (s == "sigma")
    return SweepAxis::sigma;
  if (s == "gamma")
    return SweepAxis::gamma;
  if (s == "curve")
    return SweepAxis::curve;
  throw DomainError("unknown sweep axis '" + s + "' (expected sigma, gamma or curve)");
}

Params SweepSpec::point(double value) const
{
  switch (axis) {
  case SweepAxis::sigma: return {value, gamma, l1, l2};
  case SweepAxis::gamma: return {sigma, value, l1, l2};
  case SweepAxis::curve: return {value, curve_coefficient * std::pow(value, curve_power), l1, l2};
  }
  return {};
}

void SweepSpec::validate() const
{
  if (values.empty())
    throw DomainError("sweep has no points");
  std::optional<RegimeLabel> label;
  for (double v : values) {
    const Params p = point(v);
    p.validate();
    const auto r = classify(p.sigma, p.gamma).label;
    if (label && *label != r)
      throw DomainError("sweep mixes regimes " + regime_info(*label).letter() + " and " + regime_info(r).letter() +
                        " (at " + point_tag(p) + ")");
    label = r;
  }
}

std::vector<double> log_spaced(double a, double b, int n)
{
  if (!(a > 0.0) || !(b > 0.0) || n < 1)
    throw DomainError("log_spaced needs positive end points and n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        n == 1 ? a : std::exp(std::log(a) + (std::log(b) - std::log(a)) * static_cast<double>(k) / (n - 1));
  out.front() = a;
  if (n > 1)
    out.back() = b;
  return out;
}

SweepTable run_sweep(const SweepSpec& spec)
{
  spec.validate();
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());
  SweepTable t;
  t.axis = spec.axis;
  t.rows.resize(values.size());
  parallel_for(static_cast<std::ptrdiff_t>(values.size()), [&](std::ptrdiff_t k) {
    const Params p = spec.point(values[static_cast<std::size_t>(k)]);
    SweepRow& row = t.rows[static_cast<std::size_t>(k)];
    row.sigma = p.sigma;
    row.gamma = p.gamma;
    row.regime = classify(p.sigma, p.gamma).label;
    try {
      Construction c;
      TiledEnergy e;
      if (spec.construction) {
        if (auto why = unavailable(*spec.construction, p))
          throw DomainError(*why);
        Overrides o;
        if (spec.delta_factor != 1.0)
          o.delta_factor = spec.delta_factor;
        c = make_construction(*spec.construction, p, o);
        e = tiled_energy(c.layout, spec.policy);
      } else {
        auto s = best_construction(p, spec.policy);
        c = std::move(s.construction);
        e = std::move(s.energy);
      }
      row.energy = e.energy;
      row.construction = c.kind;
      row.nx = e.max_nx;
      row.ny = e.max_ny;
      if (c.schedule) {
        row.N = c.schedule->N;
        row.h0 = c.schedule->h0;
        row.deltaN = c.schedule->deltaN();
      } else if (c.laminate) {
        row.h0 = c.laminate->h;
        row.deltaN = c.laminate->delta;
      }
    } catch (const DomainError& e) {
      throw DomainError("sweep point " + point_tag(p) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("sweep point " + point_tag(p) + ": " + e.what());
    }
  });
  return t;
}

std::string sweep_csv(const SweepTable& t)
{
  std::ostringstream os;
  os << "sigma,gamma,stretching,bending,bonding,total,regime,nx,ny,N,h0,deltaN\n";
  for (const auto& r : t.rows)
    os << num(r.sigma) << ',' << num(r.gamma) << ',' << num(r.energy.stretching) << ',' << num(r.energy.bending)
       << ',' << num(r.energy.bonding) << ',' << num(r.energy.total) << ',' << regime_info(r.regime).letter() << ','
       << r.nx << ',' << r.ny << ',' << r.N << ',' << num(r.h0) << ',' << num(r.deltaN) << '\n';
  return os.str();
}

Fit fit_power_law(const std::vector<double>& x, const std::vector<double>& energy)
{
  if (x.size() != energy.size() || x.size() < 2)
    throw DomainError("power-law fit needs at least two (x, E) pairs");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0))
      throw DomainError("power-law fit needs positive coordinates");
    if (!(energy[k] > 0.0) || !std::isfinite(energy[k]))
      throw DomainError("power-law fit needs positive energies (row " + std::to_string(k) + ")");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(energy[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (!(sxx > 0.0))
    throw DomainError("power-law fit needs at least two distinct coordinates");
  Fit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = ly[k] - (f.intercept + f.slope * lx[k]);
    ssr += r * r;
  }
  f.stderr_slope = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

Fit fit_exponent(const SweepTable& t, FitCoordinate c)
{
  if (t.rows.size() < 4)
    throw DomainError("exponent fit needs at least 4 sweep rows, got " + std::to_string(t.rows.size()));
  std::vector<double> x, e;
  for (const auto& r : t.rows) {
    if (r.regime != t.rows.front().regime)
      throw DomainError("exponent fit over mixed regimes");
    x.push_back(c == FitCoordinate::sigma ? r.sigma : r.gamma);
    e.push_back(r.energy.total);
  }
  return fit_power_law(x, e);
}

double laminate_cell_energy(const LaminateCellSpec& cell, const Params& p)
{
  cell.validate();
  if (cell.profile != ProfileKind::cosine)
    throw DomainError("the laminate closed form holds for the cosine profile only");
  const double b = p.bending_prefactor();
  return 2.0 * std::numbers::pi * std::numbers::pi * b * cell.l * cell.h / (cell.delta * cell.delta) +
         2.0 * p.gamma * cell.l * cell.delta;
}

std::vector<Grid> laminate_cell_ladder(const LaminateCellSpec& cell, int samples, int levels)
{
  cell.validate();
  if (samples < 1 || levels < 1)
    throw DomainError("ladder needs samples >= 1 and levels >= 1");
  const auto n0 = static_cast<Eigen::Index>(std::ceil(2.0 * cell.h * samples / cell.delta - 1e-9));
  std::vector<Grid> out;
  for (int k = 0; k < levels; ++k)
    out.push_back(Grid{4, n0 * (Eigen::Index{1} << k) + 1, 0.0, -cell.h, cell.l, 2.0 * cell.h});
  return out;
}

std::vector<Grid> domain_ladder(const Params& p, Eigen::Index nx, Eigen::Index ny, int levels)
{
  std::vector<Grid> out;
  for (int k = 0; k < levels; ++k)
    out.push_back(Grid::domain(p, (nx - 1) * (Eigen::Index{1} << k) + 1, (ny - 1) * (Eigen::Index{1} << k) + 1));
  return out;
}

ConvergenceReport convergence_study(const std::string& construction, const Params& p, const std::vector<Grid>& ladder,
                                    const LaminateCellSpec& cell)
{
  p.validate();
  if (ladder.size() < 3)
    throw DomainError("convergence study needs at least 3 grids");
  std::vector<double> ratio(ladder.size(), 1.0);
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    ladder[k].validate();
    if (k == 0)
      continue;
    const Grid& a = ladder[k - 1];
    const Grid& b = ladder[k];
    auto same = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(u)); };
    if (!same(a.x0, b.x0) || !same(a.y0, b.y0) || !same(a.lx, b.lx) || !same(a.ly, b.ly))
      throw DomainError("convergence ladder is not nested: grids " + std::to_string(k - 1) + " and " +
                        std::to_string(k) + " cover different extents");
    const auto ax = a.nx - 1, ay = a.ny - 1, bx = b.nx - 1, by = b.ny - 1;
    if (bx % ax != 0 || by % ay != 0 || (bx == ax && by == ay))
      throw DomainError("convergence ladder is not nested: grid " + std::to_string(k) +
                        " does not refine grid " + std::to_string(k - 1) + " by integer factors");
    ratio[k] = static_cast<double>(std::max(bx / ax, by / ay));
  }

  ConvergenceReport rep;
  rep.construction = construction;
  std::optional<double> closed;
  for (const Grid& g : ladder) {
    DisplacementField f;
    if (construction == "laminate_cell") {
      Params q = p;
      q.l2 = std::max(q.l2, 2.0 * cell.h);
      q.l1 = std::max(q.l1, cell.l);
      q.sigma = p.sigma * p.l1 / q.l1;
      f = laminate_cell(cell, q, g);
      closed = laminate_cell_energy(cell, p);
    } else if (construction == "flat") {
      f = flat_construction(p, g);
      closed = g.lx * g.ly;
    } else if (construction == "laminate") {
      f = laminate_full(p, g);
    } else if (construction == "branching") {
      f = branching_full(p, g);
    } else {
      throw DomainError("unknown construction '" + construction +
                        "' for a convergence study (expected laminate_cell, flat, laminate or branching)");
    }
    rep.levels.push_back({g, evaluate_energy(f), 0.0});
  }

  const std::size_t n = rep.levels.size();
  double scale = 1.0;
  for (const auto& l : rep.levels)
    scale = std::max(scale, std::abs(l.energy.total));
  if (closed) {
    rep.reference = "closed_form";
    rep.reference_value = *closed;
    for (auto& l : rep.levels)
      l.error = std::abs(l.energy.total - *closed);
    for (std::size_t k = 1; k < n; ++k) {
      const double a = rep.levels[k - 1].error, b = rep.levels[k].error;
      rep.orders.push_back(a > 0.0 && b > 0.0 ? std::log(a / b) / std::log(ratio[k]) : 0.0);
    }
  } else {
    // Richardson: successive differences shrink by r^p.
    rep.reference = "richardson";
    rep.reference_value = rep.levels.back().energy.total;
    for (auto& l : rep.levels)
      l.error = std::abs(l.energy.total - rep.reference_value);
    for (std::size_t k = 2; k < n; ++k) {
      const double a = std::abs(rep.levels[k - 1].energy.total - rep.levels[k - 2].energy.total);
      const double b = std::abs(rep.levels[k].energy.total - rep.levels[k - 1].energy.total);
      rep.orders.push_back(a > 0.0 && b > 0.0 ? std::log(a / b) / std::log(ratio[k]) : 0.0);
    }
  }
  rep.exact = true;
  for (std::size_t k = 0; k < n; ++k) {
    const double spread = closed ? rep.levels[k].error
                                 : (k == 0 ? 0.0 : std::abs(rep.levels[k].energy.total - rep.levels[k - 1].energy.total));
    if (spread > 1e-12 * scale)
      rep.exact = false;
  }
  rep.order = rep.exact || rep.orders.empty() ? 0.0 : rep.orders.back();
  return rep;
}

ConstructionKind regime_construction(RegimeLabel r)
{
  switch (r) {
  case RegimeLabel::A: return ConstructionKind::flat;
  case RegimeLabel::B: return ConstructionKind::laminate;
  case RegimeLabel::C:
  case RegimeLabel::D: return ConstructionKind::branching;
  }
  return ConstructionKind::flat;
}

SandwichReport sandwich_check(const std::vector<Params>& points, const ResolutionPolicy& policy, double max_variation)
{
  if (points.empty())
    throw DomainError("sandwich check needs at least one point");
  SandwichReport rep;
  rep.points = points;
  rep.regime = classify(points.front().sigma, points.front().gamma).label;
  for (const auto& p : points) {
    p.validate();
    const auto r = classify(p.sigma, p.gamma).label;
    if (r != rep.regime)
      throw DomainError("sandwich check mixes regimes " + regime_info(rep.regime).letter() + " and " +
                        regime_info(r).letter());
  }
  if (rep.regime != RegimeLabel::A && rep.regime != RegimeLabel::D)
    throw DomainError("sandwich check applies in regimes A and D only, got " + regime_info(rep.regime).letter());
  rep.upper.resize(points.size());
  parallel_for(static_cast<std::ptrdiff_t>(points.size()), [&](std::ptrdiff_t k) {
    const Params& p = points[static_cast<std::size_t>(k)];
    const auto c = make_construction(regime_construction(rep.regime), p);
    rep.upper[static_cast<std::size_t>(k)] = tiled_energy(c.layout, policy).energy.total;
  });
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Params& p = points[k];
    rep.lower.push_back(lower_bound_scaling(p.sigma, p.gamma, p.l1, p.l2));
    rep.ratios.push_back(rep.upper[k] / rep.lower.back());
    lo = k == 0 ? rep.ratios.back() : std::min(lo, rep.ratios.back());
    hi = k == 0 ? rep.ratios.back() : std::max(hi, rep.ratios.back());
  }
  rep.variation = hi / lo;
  rep.pass = rep.variation <= max_variation;
  return rep;
}

namespace {

// Portable draws from mt19937_64 (the std distributions are not specified bit-for-bit).
struct Draw {
  std::mt19937_64 rng;
  double uniform(double a, double b) { return a + (b - a) * static_cast<double>(rng() >> 11) * 0x1.0p-53; }
  double normal()
  {
    double u = 0.0;
    while (u <= 0.0)
      u = uniform(0.0, 1.0);
    const double v = uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
  int below(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
};

struct Bump {
  double a, cx, cy, rx, ry;
};

// Field in base coordinates: supported in {x >= 1/2} (axis) or {x + y >= 1}
// (diagonal); a dihedral map of the square places the half.
// c * q(d / a) * cos(k pi tau + phase), with d the distance from the half
// line, tau the tangential coordinate and q the quintic ramp.
struct Ramp {
  double c, a, k, phase;
};

struct RandomField {
  bool diagonal = false;
  int symmetry = 0;
  std::vector<Bump> comp[2];
  std::vector<Ramp> ramps[2];
};

RandomField random_field(Draw& d)
{
  RandomField f;
  f.diagonal = d.below(2) == 1;
  f.symmetry = d.below(8);
  for (auto& comp : f.comp) {
    const int m = 1 + d.below(4);
    for (int k = 0; k < m; ++k) {
      Bump b{};
      b.a = d.normal();
      b.rx = d.uniform(0.06, 0.25);
      b.ry = d.uniform(0.06, 0.25);
      if (!f.diagonal) {
        b.cx = d.uniform(0.5 + b.rx, 1.0 + 0.5 * b.rx);
        b.cy = d.uniform(0.0, 1.0);
      } else {
        // lower-left corner of the bump box stays in x + y >= 1
        b.cx = d.uniform(b.rx + b.ry, 1.0 + 0.5 * b.rx);
        b.cy = d.uniform(std::max(0.0, 1.0 + b.rx + b.ry - b.cx), 1.0 + 0.5 * b.ry);
      }
      comp.push_back(b);
    }
  }
  for (auto& ramps : f.ramps) {
    const int m = d.below(3);
    for (int k = 0; k < m; ++k)
      ramps.push_back({d.normal(), d.uniform(0.05, 0.5), static_cast<double>(d.below(4)), d.uniform(0.0, 6.283185307179586)});
  }
  return f;
}

std::pair<double, double> to_base(int s, double x, double y)
{
  if (s & 1)
    x = 1.0 - x;
  if (s & 2)
    y = 1.0 - y;
  if (s & 4)
    std::swap(x, y);
  return {x, y};
}

// {int |f|^2, int |Df|^2} by the trapezoid rule on an (n+1)^2 grid.
std::pair<double, double> field_integrals(const RandomField& f, int n, double scale)
{
  const BumpProfile& psi = profile(ProfileKind::bump);
  const double hstep = 1.0 / n;
  double F = 0.0, G = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      const auto [x, y] = to_base(f.symmetry, i * hstep, j * hstep);
      double ff = 0.0, gg = 0.0;
      const double r2 = std::numbers::sqrt2 / 2.0;
      const double dist = f.diagonal ? (x + y - 1.0) * r2 : x - 0.5;
      const double tau = f.diagonal ? (y - x) * r2 : y;
      const double nx = f.diagonal ? r2 : 1.0, ny = f.diagonal ? r2 : 0.0;
      const double tx = f.diagonal ? -r2 : 0.0, ty = f.diagonal ? r2 : 1.0;
      for (int c = 0; c < 2; ++c) {
        double v = 0.0, vx = 0.0, vy = 0.0;
        for (const auto& r : f.ramps[c]) {
          if (dist <= 0.0)
            break;
          const double s = std::min(dist / r.a, 1.0);
          const double q = quintic_step(s), dq = dist < r.a ? quintic_step_d1(s) / r.a : 0.0;
          const double arg = r.k * std::numbers::pi * tau + r.phase;
          const double a = scale * r.c;
          const double gn = a * dq * std::cos(arg), gt = -a * q * r.k * std::numbers::pi * std::sin(arg);
          v += a * q * std::cos(arg);
          vx += gn * nx + gt * tx;
          vy += gn * ny + gt * ty;
        }
        for (const auto& b : f.comp[c]) {
          const double s = (x - b.cx) / b.rx, t = (y - b.cy) / b.ry;
          if (std::abs(s) >= 1.0 || std::abs(t) >= 1.0)
            continue;
          const double a = scale * b.a;
          const double ps = psi.value(s), pt = psi.value(t);
          v += a * ps * pt;
          vx += a * psi.d1(s) / b.rx * pt;
          vy += a * ps * psi.d1(t) / b.ry;
        }
        ff += v * v;
        gg += vx * vx + vy * vy;
      }
      F += wi * wj * ff;
      G += wi * wj * gg;
    }
  }
  return {F * hstep * hstep, G * hstep * hstep};
}

double ratio_of(const std::pair<double, double>& fg) { return fg.second > 0.0 ? fg.first / fg.second : 0.0; }

}  // namespace

PoincareReport poincare_check(std::size_t n, std::uint64_t seed, int resolution)
{
  if (n < 1)
    throw DomainError("poincare check needs at least one sample");
  if (resolution < 8)
    throw DomainError("poincare check needs resolution >= 8");
  PoincareReport rep;
  rep.samples = n;
  rep.seed = seed;
  rep.resolution = resolution;
  rep.bound = 6.0 / (std::numbers::pi * std::numbers::pi);
  Draw d{std::mt19937_64(seed)};
  std::vector<RandomField> fields;
  for (std::size_t k = 0; k < n; ++k)
    fields.push_back(random_field(d));
  rep.ratios.resize(n);
  std::vector<double> dev(n);
  parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t k) {
    const auto& f = fields[static_cast<std::size_t>(k)];
    const double r = ratio_of(field_integrals(f, resolution, 1.0));
    const double r2 = ratio_of(field_integrals(f, resolution, 7.3));
    rep.ratios[static_cast<std::size_t>(k)] = r;
    dev[static_cast<std::size_t>(k)] = std::abs(r - r2);
  });
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.scale_deviation = *std::max_element(dev.begin(), dev.end());
  rep.pass = rep.max_ratio <= rep.bound;
  return rep;
}

}  // namespace film
