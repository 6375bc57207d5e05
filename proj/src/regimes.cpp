#include "film/regimes.hpp"

#include <cmath>

#include "film/errors.hpp"

namespace film {

namespace {

void check(double sigma, double gamma)
{
  if (!(sigma > 0.0 && sigma < 1.0))
    throw DomainError("sigma must lie in (0, 1)");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("gamma must be finite and >= 0");
}

}  // namespace

std::string Rational::str() const
{
  if (den == 1)
    return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

double power(double base, Rational e)
{
  if (e.num == 0)
    return 1.0;
  if (e.den == 1 && e.num == -1)
    return 1.0 / base;
  if (e.den == 1 && e.num == 1)
    return base;
  return std::pow(base, e.value());
}

std::string Regime::letter() const
{
  switch (label) {
  case RegimeLabel::A: return "A";
  case RegimeLabel::B: return "B";
  case RegimeLabel::C: return "C";
  case RegimeLabel::D: return "D";
  }
  return "?";
}

Regime regime_info(RegimeLabel label)
{
  switch (label) {
  case RegimeLabel::A: return {label, {0, 1}, {0, 1}, "flat"};
  case RegimeLabel::B: return {label, {2, 5}, {2, 5}, "laminate"};
  case RegimeLabel::C: return {label, {1, 2}, {5, 8}, "localized branching"};
  case RegimeLabel::D: return {label, {1, 1}, {0, 1}, "uniform branching"};
  }
  throw DomainError("unknown regime");
}

RegimeBoundaries regime_boundaries(double sigma)
{
  return {power(sigma, {-1, 1}), power(sigma, {-4, 9}), power(sigma, {4, 5})};
}

Regime classify(double sigma, double gamma)
{
  check(sigma, gamma);
  const auto b = regime_boundaries(sigma);
  if (gamma >= b.flat)
    return regime_info(RegimeLabel::A);
  if (gamma >= b.laminate)
    return regime_info(RegimeLabel::B);
  if (gamma >= b.uniform)
    return regime_info(RegimeLabel::C);
  return regime_info(RegimeLabel::D);
}

double upper_bound_scaling(double sigma, double gamma, double l1, double l2)
{
  const Regime r = classify(sigma, gamma);
  return l1 * l2 * power(sigma, r.a) * power(gamma, r.b);
}

double lower_bound_scaling(double sigma, double gamma, double l1, double l2)
{
  check(sigma, gamma);
  if (gamma >= power(sigma, {-1, 1}))
    return l1 * l2;
  if (gamma >= power(sigma, {1, 2}))
    return l1 * l2 * power(sigma * gamma, {2, 3});
  return l1 * l2 * sigma;
}

PatternScales pattern_scales(double sigma, double gamma, double l1)
{
  check(sigma, gamma);
  PatternScales s;
  s.h0 = l1 * power(sigma, {1, 4}) * power(gamma, {1, 16});
  s.delta0 = l1 * power(sigma, {3, 4}) * power(gamma, {-5, 16});
  s.A0 = l1 * power(sigma, {1, 2}) * power(gamma, {-1, 8});
  if (classify(sigma, gamma).label != RegimeLabel::C) {
    s.in_scope = false;
    s.warning = "pattern scales describe regime C; (sigma, gamma) lies in regime " + classify(sigma, gamma).letter();
  }
  return s;
}

}  // namespace film
