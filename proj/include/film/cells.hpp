#pragma once

#include "film/field.hpp"
#include "film/profiles.hpp"

namespace film {

// One laminate period: w = A psi(y/delta) on (0,l) x (-h,h), u = x/2 + d.
struct LaminateCellSpec {
  double h = 1.0;
  double delta = 0.25;
  double l = 1.0;
  double d = 0.0;
  ProfileKind profile = ProfileKind::cosine;

  void validate() const;
  // A^2 = delta h / c_*; for the cosine profile A^2 = 8 delta h / pi^2.
  double amplitude() const;
};

// Closed-form v of the cosine laminate (zero stretching, v(+-h) = 0).
double cosine_laminate_v(double y, double h, double delta, double amplitude);

DisplacementField laminate_cell(const LaminateCellSpec& spec, const Params& params, const Grid& grid);

// Boundary layer on (0, eps) x (0, l2): w = c(x/eps) w_lam(y), v = c(x/eps)^2 v_lam(y),
// u = x/2 with c(t) = t^2 (3 - 2t); 2h-periodic copies glued from y = 0 and a
// flat remainder strip on top.
DisplacementField laminate_boundary_layer(double eps, double h, double delta, const Params& params, const Grid& grid,
                                          ProfileKind profile = ProfileKind::cosine);

constexpr double kNormalizationTol = 5e-2;

// Observed envelope of stretching / (h^6 / (delta L^3)) for fold_split_cell
// with the bump profile at 12 samples per delta; fold_shrink_cell stays far
// below it.
constexpr double kFoldStretchingEnvelope = 100.0;

struct InPlane {
  Array2<double> u, v;
};

// (u, v) from w on (0,l) x (-h,h): v = 1/2 int_{-h}^y (1 - w_y^2),
// u = x/2 - int_{-h}^y (w_x w_y + v_x).  Staggered cumulative midpoint rule in
// y; w_x and v_x by centered differences in x.  Rejects columns whose
// normalization int (1 - w_y^2) deviates from zero by more than tol (relative).
// A caller that knows w_x exactly passes it in wx; v_x is then the exact
// x-derivative of the discrete v.
InPlane uv_from_w(const Array2<double>& w, const Grid& grid, double h, double tol = kNormalizationTol,
                  const Array2<double>* wx = nullptr);

// Offset of the split folds: h/2 at x = 0, 0 at x = L, flat near both ends.
double split_offset(double x, double h, double length);
// A(x) with A^2 int_0^h wt_y^2 dy = h for wt = psi_d(y + phi) + psi_d(y - phi).
double split_amplitude(double phi, double h, double delta, const BumpProfile& psi);

struct AmplitudeSlope {
  double value = 0.0, dphi = 0.0;
};
// A(phi) together with dA/dphi by the same quadrature.
AmplitudeSlope split_amplitude_slope(double phi, double h, double delta, const BumpProfile& psi);
// Fold half-width of the shrink cell: lambda delta at x = 0, delta at x = L.
double shrink_width(double x, double delta, double lambda, double length);

DisplacementField fold_split_cell(double h, double delta, double length, const BumpProfile& psi, const Params& params,
                                  const Grid& grid);
DisplacementField fold_shrink_cell(double h, double delta, double lambda, double length, const BumpProfile& psi,
                                   const Params& params, const Grid& grid);

namespace detail {

// Integrates one cell copy along a column from its lower edge t = -h, where
// v = 0, u = u_edge and w = w_x = v_x = 0.  t holds the local coordinates of
// the m samples (increasing, within [-h, h]).
void integrate_v(const double* t, const double* w, Eigen::Index m, double h, double* v);
// d/dx of integrate_v given w_x at the same samples.
void integrate_vx(const double* t, const double* w, const double* wx, Eigen::Index m, double h, double* vx);
void integrate_u(const double* t, const double* w, const double* wx, const double* vx, Eigen::Index m, double h,
                 double u_edge, double* u);

}  // namespace detail

}  // namespace film
