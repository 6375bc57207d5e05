#include "film/profiles.hpp"

#include <cmath>
#include <numbers>

#include "film/errors.hpp"

namespace film {

namespace {

constexpr double kPi = std::numbers::pi;

struct Mollifier {
  // psi = exp(g), g = 1 - 1/s, s = 1 - t^2; returns false where psi underflows.
  static bool terms(double t, double& psi, double& g1, double& g2, double& g3)
  {
    const double s = 1.0 - t * t;
    if (s <= 0.0)
      return false;
    const double g = 1.0 - 1.0 / s;
    if (g < -700.0)
      return false;
    psi = std::exp(g);
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    g1 = -2.0 * t / s2;
    g2 = -2.0 / s2 - 8.0 * t * t / s3;
    g3 = -24.0 * t / s3 - 48.0 * t * t * t / s4;
    return true;
  }
};

double trapezoid_c_star(const BumpProfile& p)
{
  const int n = 20000;
  double s = 0.0;
  for (int k = 1; k < n; ++k) {
    const double d = p.d1(static_cast<double>(k) / n);
    s += d * d;
  }
  const double d1 = p.d1(1.0);
  s += 0.5 * d1 * d1;
  return s / n;
}

}  // namespace

std::string to_string(ProfileKind k) { return k == ProfileKind::cosine ? "cosine" : "bump"; }

ProfileKind profile_from_string(const std::string& s)
{
  if (s == "cosine")
    return ProfileKind::cosine;
  if (s == "bump")
    return ProfileKind::bump;
  throw DomainError("unknown profile '" + s + "'");
}

BumpProfile::BumpProfile(ProfileKind kind) : kind_(kind), c_star_(0.0)
{
  c_star_ = kind == ProfileKind::cosine ? kPi * kPi / 8.0 : trapezoid_c_star(*this);
}

double BumpProfile::value(double t) const
{
  if (std::abs(t) >= 1.0)
    return 0.0;
  if (kind_ == ProfileKind::cosine)
    return 0.5 * (1.0 + std::cos(kPi * t));
  double psi, g1, g2, g3;
  return Mollifier::terms(t, psi, g1, g2, g3) ? psi : 0.0;
}

double BumpProfile::d1(double t) const
{
  if (std::abs(t) >= 1.0)
    return 0.0;
  if (kind_ == ProfileKind::cosine)
    return -0.5 * kPi * std::sin(kPi * t);
  double psi, g1, g2, g3;
  return Mollifier::terms(t, psi, g1, g2, g3) ? psi * g1 : 0.0;
}

double BumpProfile::d2(double t) const
{
  if (std::abs(t) >= 1.0)
    return 0.0;
  if (kind_ == ProfileKind::cosine)
    return -0.5 * kPi * kPi * std::cos(kPi * t);
  double psi, g1, g2, g3;
  return Mollifier::terms(t, psi, g1, g2, g3) ? psi * (g1 * g1 + g2) : 0.0;
}

double BumpProfile::d3(double t) const
{
  if (std::abs(t) >= 1.0)
    return 0.0;
  if (kind_ == ProfileKind::cosine)
    return 0.5 * kPi * kPi * kPi * std::sin(kPi * t);
  double psi, g1, g2, g3;
  return Mollifier::terms(t, psi, g1, g2, g3) ? psi * (g1 * g1 * g1 + 3.0 * g1 * g2 + g3) : 0.0;
}

const BumpProfile& profile(ProfileKind k)
{
  static const BumpProfile bump(ProfileKind::bump);
  static const BumpProfile cosine(ProfileKind::cosine);
  return k == ProfileKind::cosine ? cosine : bump;
}

double cubic_step(double t)
{
  if (t <= 0.0)
    return 0.0;
  if (t >= 1.0)
    return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

double cubic_step_d1(double t)
{
  if (t <= 0.0 || t >= 1.0)
    return 0.0;
  return 6.0 * t * (1.0 - t);
}

double quintic_step(double t)
{
  if (t <= 0.0)
    return 0.0;
  if (t >= 1.0)
    return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double quintic_step_d1(double t)
{
  if (t <= 0.0 || t >= 1.0)
    return 0.0;
  const double q = t * (1.0 - t);
  return 30.0 * q * q;
}

double plateau_ramp(double x, double length) { return quintic_step((x - length / 8.0) / (0.75 * length)); }

double plateau_ramp_d1(double x, double length)
{
  return quintic_step_d1((x - length / 8.0) / (0.75 * length)) / (0.75 * length);
}

}  // namespace film
