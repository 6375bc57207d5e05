#pragma once

#include <string>

namespace film {

enum class ProfileKind { cosine, bump };

std::string to_string(ProfileKind k);
ProfileKind profile_from_string(const std::string& s);

// Even fold profile on [-1, 1] with psi(0) = 1 and psi = 0 for |t| >= 1.
//   bump:   exp(1 - 1/(1 - t^2)), smooth
//   cosine: (1 + cos(pi t)) / 2, curvature jumps at |t| = 1
class BumpProfile {
public:
  explicit BumpProfile(ProfileKind kind = ProfileKind::bump);

  ProfileKind kind() const { return kind_; }
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;
  // c_* = int_0^1 psi'(t)^2 dt; a fold A psi(y/delta) over half-period h has
  // int_0^h w_y^2 = h exactly when A^2 = delta h / c_*.
  double c_star() const { return c_star_; }

private:
  ProfileKind kind_;
  double c_star_;
};

const BumpProfile& profile(ProfileKind k);

// t^2 (3 - 2t) clamped to [0, 1]: the boundary-layer interpolant.
double cubic_step(double t);
double cubic_step_d1(double t);

// 6t^5 - 15t^4 + 10t^3 clamped to [0, 1].
double quintic_step(double t);
double quintic_step_d1(double t);

// 0 on [0, L/8], 1 on [7L/8, L], quintic in between.
double plateau_ramp(double x, double length);
double plateau_ramp_d1(double x, double length);

}  // namespace film
