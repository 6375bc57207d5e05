#include "film/layout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "film/cells.hpp"
#include "film/errors.hpp"
#include "film/parallel.hpp"
#include "sampling.hpp"

namespace film {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Node rows of one band column grouped by cell copy.
struct CopyRows {
  std::vector<double> t;       // local coordinate per node, valid where copy >= 0
  std::vector<long> copy;      // -1 in the flat remainder
  std::vector<std::pair<Eigen::Index, Eigen::Index>> segments;  // [begin, end)
};

CopyRows copy_rows(const Grid& g, double h, double height)
{
  CopyRows r;
  const long K = period_count(height, h);
  r.t.assign(static_cast<std::size_t>(g.ny), 0.0);
  r.copy.assign(static_cast<std::size_t>(g.ny), -1);
  for (Eigen::Index j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    const long k = static_cast<long>(std::floor(y / (2.0 * h) + 1e-9));
    if (k < 0 || k >= K)
      continue;
    r.copy[static_cast<std::size_t>(j)] = k;
    r.t[static_cast<std::size_t>(j)] = std::clamp(y - (2.0 * static_cast<double>(k) + 1.0) * h, -h, h);
  }
  Eigen::Index j = 0;
  while (j < g.ny) {
    const long k = r.copy[static_cast<std::size_t>(j)];
    Eigen::Index e = j + 1;
    while (e < g.ny && r.copy[static_cast<std::size_t>(e)] == k)
      ++e;
    if (k >= 0)
      r.segments.emplace_back(j, e);
    j = e;
  }
  return r;
}

void set_flat(DisplacementField& f, Eigen::Index i, Eigen::Index j)
{
  f.u(i, j) = 0.5 * f.grid.x(i);
  f.v(i, j) = 0.0;
  f.w(i, j) = 0.0;
  f.support(i, j) = 0;
}

void fill_laminate_like(DisplacementField& f, const std::vector<Eigen::Index>& cols, const Band& band, double h,
                        double delta, ProfileKind kind, double eps, double height)
{
  const auto rows = copy_rows(f.grid, h, height);
  const auto ny = f.grid.ny;
  const auto s = detail::laminate_sampler(h, delta, kind);
  std::vector<double> w(static_cast<std::size_t>(ny), 0.0), v(static_cast<std::size_t>(ny), 0.0);
  std::vector<std::uint8_t> m(static_cast<std::size_t>(ny), 0);
  for (auto [b, e] : rows.segments) {
    for (Eigen::Index j = b; j < e; ++j) {
      bool inside = false;
      w[static_cast<std::size_t>(j)] = s.w(rows.t[static_cast<std::size_t>(j)], inside);
      m[static_cast<std::size_t>(j)] = inside;
      if (kind == ProfileKind::cosine)
        v[static_cast<std::size_t>(j)] = cosine_laminate_v(rows.t[static_cast<std::size_t>(j)], h, delta, s.amp);
    }
    if (kind != ProfileKind::cosine) {
      detail::normalize_copy(&rows.t[static_cast<std::size_t>(b)], e - b, h, &w[static_cast<std::size_t>(b)], nullptr);
      detail::integrate_v(&rows.t[static_cast<std::size_t>(b)], &w[static_cast<std::size_t>(b)], e - b, h,
                          &v[static_cast<std::size_t>(b)]);
    }
  }
  for (auto i : cols) {
    const double xl = f.grid.x(i) - band.x_begin + band.local_begin;
    const double c = eps > 0.0 ? cubic_step(xl / eps) : 1.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto q = static_cast<std::size_t>(j);
      if (rows.copy[q] < 0) {
        set_flat(f, i, j);
        continue;
      }
      f.u(i, j) = 0.5 * f.grid.x(i);
      f.v(i, j) = c * c * v[q];
      f.w(i, j) = c * w[q];
      f.support(i, j) = c > 0.0 && m[q];
    }
  }
}

template <typename Make>
void fill_fold(DisplacementField& f, const std::vector<Eigen::Index>& cols, const Band& band, double h, double height,
               Make&& make)
{
  const auto rows = copy_rows(f.grid, h, height);
  const auto ny = f.grid.ny;
  parallel_for(static_cast<std::ptrdiff_t>(cols.size()), [&](std::ptrdiff_t c) {
    const auto i = cols[static_cast<std::size_t>(c)];
    const double xg = f.grid.x(i);
    const auto s = make(xg - band.x_begin + band.local_begin);
    std::vector<double> W(static_cast<std::size_t>(ny), 0.0), WX(W.size(), 0.0), V(W.size(), 0.0),
        VX(W.size(), 0.0), U(W.size(), 0.5 * xg);
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto q = static_cast<std::size_t>(j);
      bool inside = false;
      if (rows.copy[q] >= 0) {
        W[q] = s.w(rows.t[q], inside);
        WX[q] = inside ? s.wx(rows.t[q]) : 0.0;
      }
      f.support(i, j) = inside;
    }
    for (auto [b, e] : rows.segments) {
      const auto o = static_cast<std::size_t>(b);
      detail::normalize_copy(&rows.t[o], e - b, h, &W[o], &WX[o]);
      detail::integrate_v(&rows.t[o], &W[o], e - b, h, &V[o]);
      detail::integrate_vx(&rows.t[o], &W[o], &WX[o], e - b, h, &VX[o]);
      detail::integrate_u(&rows.t[o], &W[o], &WX[o], &VX[o], e - b, h, 0.5 * xg, &U[o]);
    }
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto q = static_cast<std::size_t>(j);
      f.u(i, j) = U[q];
      f.v(i, j) = V[q];
      f.w(i, j) = W[q];
    }
  });
}

EnergyBreakdown flat_energy(double area)
{
  EnergyBreakdown e;
  e.stretching = area;
  e.total = area;
  return e;
}

EnergyBreakdown scaled(const EnergyBreakdown& e, double k)
{
  return {k * e.stretching, k * e.bending, k * e.bonding, k * e.total};
}

}  // namespace

double half_period(const CellShape& s)
{
  return std::visit(overloaded{[](const FlatShape&) { return 0.0; }, [](const LiftShape&) { return 0.0; },
                               [](const auto& c) { return c.h; }},
                    s);
}

std::string shape_name(const CellShape& s)
{
  return std::visit(overloaded{[](const FlatShape&) { return std::string("flat"); },
                               [](const LaminateShape&) { return std::string("laminate"); },
                               [](const BoundaryLayerShape&) { return std::string("boundary_layer"); },
                               [](const FoldSplitShape&) { return std::string("fold_split"); },
                               [](const FoldShrinkShape&) { return std::string("fold_shrink"); },
                               [](const LiftShape&) { return std::string("lift"); }},
                    s);
}

long period_count(double height, double h)
{
  if (!(h > 0.0))
    return 0;
  return static_cast<long>(std::floor(height / (2.0 * h) * (1.0 + 1e-12)));
}

void Layout::restrict_to_domain()
{
  const double l1 = params.l1;
  std::vector<Band> kept;
  for (auto& b : bands) {
    if (b.x_begin >= l1 * (1.0 - 1e-14))
      continue;
    Band c = b;
    c.x_end = std::min(c.x_end, l1);
    if (c.x_end > c.x_begin)
      kept.push_back(c);
  }
  bands = std::move(kept);
}

DisplacementField rasterize(const Layout& layout, const Grid& grid)
{
  grid.validate();
  layout.params.validate();
  DisplacementField f(grid, layout.params);
  f.support_kind = SupportKind::analytic;
  f.edge_height = layout.edge_height;
  for (Eigen::Index i = 0; i < grid.nx; ++i)
    for (Eigen::Index j = 0; j < grid.ny; ++j)
      set_flat(f, i, j);
  const double tol = 1e-9 * grid.hx();
  for (const auto& band : layout.bands) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      if (x >= band.x_begin - tol && x <= band.x_end + tol)
        cols.push_back(i);
    }
    if (cols.empty())
      continue;
    std::visit(
        overloaded{
            [&](const FlatShape&) {
              for (auto i : cols)
                for (Eigen::Index j = 0; j < grid.ny; ++j)
                  set_flat(f, i, j);
            },
            [&](const LiftShape& c) {
              for (auto i : cols) {
                const double xl = grid.x(i) - band.x_begin + band.local_begin;
                const double w = c.height * (1.0 - quintic_step(xl / c.eta));
                for (Eigen::Index j = 0; j < grid.ny; ++j) {
                  set_flat(f, i, j);
                  f.w(i, j) = w;
                  f.support(i, j) = xl < c.eta;
                }
              }
            },
            [&](const LaminateShape& c) {
              fill_laminate_like(f, cols, band, c.h, c.delta, c.profile, 0.0, layout.height);
            },
            [&](const BoundaryLayerShape& c) {
              fill_laminate_like(f, cols, band, c.h, c.delta, c.profile, c.eps, layout.height);
            },
            [&](const FoldSplitShape& c) {
              fill_fold(f, cols, band, c.h, layout.height, [&](double xl) { return detail::split_sampler(c, xl); });
            },
            [&](const FoldShrinkShape& c) {
              fill_fold(f, cols, band, c.h, layout.height, [&](double xl) { return detail::shrink_sampler(c, xl); });
            }},
        band.shape);
  }
  return f;
}

Grid tile_grid(const Band& band, double height, const ResolutionPolicy& policy)
{
  const double s = policy.samples;
  const double width = band.x_end - band.x_begin;
  auto count = [](double n) { return std::max<Eigen::Index>(4, static_cast<Eigen::Index>(std::ceil(n - 1e-9)) + 1); };
  Grid g;
  g.x0 = band.x_begin;
  g.lx = width;
  g.y0 = 0.0;
  std::visit(overloaded{[&](const FlatShape&) {
                          g.nx = 4;
                          g.ny = 4;
                          g.ly = height;
                        },
                        [&](const LiftShape& c) {
                          g.nx = count(2.0 * s * width / c.eta);
                          g.ny = 4;
                          g.ly = height;
                        },
                        [&](const LaminateShape& c) {
                          g.nx = 4;
                          g.ny = count(2.0 * c.h * s / c.delta);
                          g.ly = 2.0 * c.h;
                        },
                        [&](const BoundaryLayerShape& c) {
                          g.nx = count(2.0 * s * width / c.eps);
                          g.ny = count(2.0 * c.h * s / c.delta);
                          g.ly = 2.0 * c.h;
                        },
                        [&](const FoldSplitShape& c) {
                          // The folds drift by h/2 over the cell; keep the drift per
                          // x-step a fraction of the fold width.
                          const double hx = std::min(c.length / (4.0 * s), c.delta * c.length / (s * c.h));
                          g.nx = count(width / hx);
                          g.ny = count(2.0 * c.h * s / c.delta);
                          g.ly = 2.0 * c.h;
                        },
                        [&](const FoldShrinkShape& c) {
                          g.nx = count(4.0 * s * width / c.length);
                          g.ny = count(2.0 * c.h * s / (c.lambda * c.delta));
                          g.ly = 2.0 * c.h;
                        }},
             band.shape);
  if (static_cast<double>(g.nx) * static_cast<double>(g.ny) > policy.max_nodes)
    throw NumericalError("tile for band '" + band.role + "' needs " + std::to_string(g.nx) + " x " +
                         std::to_string(g.ny) + " nodes, above the policy limit");
  return g;
}

TiledEnergy tiled_energy(const Layout& layout, const ResolutionPolicy& policy)
{
  layout.params.validate();
  TiledEnergy out;
  const double min_width = 1e-14 * layout.params.l1;
  double st = 0.0, be = 0.0, bo = 0.0;
  for (const auto& band : layout.bands) {
    const double width = band.x_end - band.x_begin;
    if (width <= min_width)
      continue;
    BandEnergy r;
    r.role = band.role;
    r.x_begin = band.x_begin;
    r.x_end = band.x_end;
    const double h = half_period(band.shape);
    const bool periodic = h > 0.0;
    const long K = periodic ? period_count(layout.height, h) : 1;
    if (std::holds_alternative<FlatShape>(band.shape) || K == 0) {
      r.energy = flat_energy(width * layout.height);
    } else {
      const Grid g = tile_grid(band, layout.height, policy);
      Layout tile;
      tile.params = layout.params;
      tile.height = periodic ? 2.0 * h : layout.height;
      tile.edge_height = layout.edge_height;
      tile.bands = {band};
      const auto one = evaluate_energy(rasterize(tile, g));
      r.copies = K;
      r.nx = g.nx;
      r.ny = g.ny;
      out.max_nx = std::max(out.max_nx, g.nx);
      out.max_ny = std::max(out.max_ny, g.ny);
      r.energy = scaled(one, static_cast<double>(K));
      if (periodic) {
        const auto rest = flat_energy(width * (layout.height - 2.0 * h * static_cast<double>(K)));
        r.energy.stretching += rest.stretching;
        r.energy.total = r.energy.stretching + r.energy.bending + r.energy.bonding;
      }
    }
    st += r.energy.stretching;
    be += r.energy.bending;
    bo += r.energy.bonding;
    out.bands.push_back(r);
  }
  out.energy = {st, be, bo, st + be + bo};
  return out;
}

double finest_width(const Layout& layout)
{
  double d = 0.0;
  auto take = [&](double x) { d = d == 0.0 ? x : std::min(d, x); };
  for (const auto& b : layout.bands)
    std::visit(overloaded{[](const FlatShape&) {}, [](const LiftShape&) {}, [&](const LaminateShape& c) { take(c.delta); },
                          [&](const BoundaryLayerShape& c) { take(c.delta); },
                          [&](const FoldSplitShape& c) { take(c.delta); },
                          [&](const FoldShrinkShape& c) { take(c.lambda * c.delta); }},
               b.shape);
  return d;
}

}  // namespace film
