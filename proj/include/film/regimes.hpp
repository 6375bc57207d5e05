#pragma once

#include <string>

#include "film/params.hpp"

namespace film {

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

double power(double base, Rational e);

enum class RegimeLabel { A, B, C, D };

struct Regime {
  RegimeLabel label = RegimeLabel::A;
  Rational a, b;  // energy ~ l1 l2 sigma^a gamma^b
  std::string name;

  std::string letter() const;
};

Regime regime_info(RegimeLabel label);

// gamma thresholds at fixed sigma: A above sigma^-1, B above sigma^-4/9,
// C above sigma^4/5.  Each boundary belongs to the regime above it.
struct RegimeBoundaries {
  double flat;
  double laminate;
  double uniform;
};

RegimeBoundaries regime_boundaries(double sigma);
Regime classify(double sigma, double gamma);

// l1 l2 sigma^a gamma^b for the regime of (sigma, gamma), no constant.
double upper_bound_scaling(double sigma, double gamma, double l1, double l2);
// l1 l2 {1, (sigma gamma)^2/3, sigma} split at gamma = sigma^-1 and gamma = sigma^1/2.
double lower_bound_scaling(double sigma, double gamma, double l1, double l2);

struct PatternScales {
  double h0 = 0.0, delta0 = 0.0, A0 = 0.0;
  bool in_scope = true;
  std::string warning;
};

// h0 ~ l1 sigma^1/4 gamma^1/16, delta0 ~ l1 sigma^3/4 gamma^-5/16,
// A0 ~ l1 sigma^1/2 gamma^-1/8; meaningful in regime C only.
PatternScales pattern_scales(double sigma, double gamma, double l1);

}  // namespace film
