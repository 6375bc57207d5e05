#include "film/admissibility.hpp"

#include <cmath>
#include <sstream>

#include "film/stencils.hpp"

namespace film {

namespace {

constexpr double kValueTol = 1e-12;
constexpr double kSlopeTol = 1e-9;

struct Collector {
  std::vector<Violation> out;

  void add(ViolationKind k, Eigen::Index i, Eigen::Index j, double mag)
  {
    for (auto& v : out) {
      if (v.kind != k)
        continue;
      ++v.samples;
      if (mag > v.magnitude) {
        v.magnitude = mag;
        v.i = i;
        v.j = j;
      }
      return;
    }
    out.push_back({k, i, j, mag, 1});
  }
};

}  // namespace

std::string to_string(ViolationKind k)
{
  switch (k) {
  case ViolationKind::non_finite: return "non_finite";
  case ViolationKind::clamped_u: return "clamped_u";
  case ViolationKind::clamped_v: return "clamped_v";
  case ViolationKind::clamped_w: return "clamped_w";
  case ViolationKind::clamped_slope: return "clamped_slope";
  case ViolationKind::positivity: return "positivity";
  case ViolationKind::support_mask: return "support_mask";
  }
  return "unknown";
}

const Violation* AdmissibilityReport::find(ViolationKind k) const
{
  for (auto& v : violations)
    if (v.kind == k)
      return &v;
  return nullptr;
}

std::string AdmissibilityReport::summary() const
{
  if (ok())
    return "admissible";
  std::ostringstream os;
  for (auto& v : violations)
    os << to_string(v.kind) << ": " << v.samples << " sample(s), worst " << v.magnitude << " at (" << v.i << ", " << v.j
       << ")\n";
  return os.str();
}

AdmissibilityReport check_admissible(const DisplacementField& f)
{
  Collector c;
  const auto nx = f.grid.nx, ny = f.grid.ny;
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j)
      if (!std::isfinite(f.u(i, j)) || !std::isfinite(f.v(i, j)) || !std::isfinite(f.w(i, j)))
        c.add(ViolationKind::non_finite, i, j, INFINITY);
  if (!c.out.empty())
    return {c.out};

  // Slope at the clamped edge: the third-order one-sided estimate must vanish
  // up to its own discretization error, measured against the second-order one.
  const bool clamped_edge = f.grid.x0 == 0.0;
  if (clamped_edge) {
    const double hx = f.grid.hx();
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double eu = std::abs(f.u(0, j)), ev = std::abs(f.v(0, j)), ew = std::abs(f.w(0, j) - f.edge_height);
      if (eu > kValueTol)
        c.add(ViolationKind::clamped_u, 0, j, eu);
      if (ev > kValueTol)
        c.add(ViolationKind::clamped_v, 0, j, ev);
      if (ew > kValueTol) {
        c.add(ViolationKind::clamped_w, 0, j, ew);
        continue;
      }
      double d3 = 0.0, d4 = 0.0;
      const auto t3 = stencil::first(nx, 0), t4 = stencil::first_left4();
      for (int m = 0; m < t3.count; ++m)
        d3 += t3.c[m] * f.w(m, j);
      for (int m = 0; m < t4.count; ++m)
        d4 += t4.c[m] * f.w(m, j);
      d3 /= hx;
      d4 /= hx;
      if (std::abs(d4) > 2.0 * std::abs(d3 - d4) + kSlopeTol)
        c.add(ViolationKind::clamped_slope, 0, j, std::abs(d4));
    }
  }
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double w = f.w(i, j);
      if (w < -kValueTol)
        c.add(ViolationKind::positivity, i, j, -w);
      if (f.support_kind == SupportKind::analytic && !f.support(i, j) && std::abs(w) > kValueTol)
        c.add(ViolationKind::support_mask, i, j, std::abs(w));
    }
  return {c.out};
}

}  // namespace film
