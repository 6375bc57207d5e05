#pragma once

#include <Eigen/Core>

namespace film::stencil {

// Taps of a one-dimensional difference operator at index k of n samples with
// unit spacing: result = sum c[m] * f[start + m].
struct Taps {
  Eigen::Index start = 0;
  int count = 0;
  double c[4] = {0, 0, 0, 0};
};

// d2/dt2: compact three-point in the interior, four-point one-sided at the ends.
inline Taps second(Eigen::Index n, Eigen::Index k)
{
  if (k == 0)
    return {0, 4, {2.0, -5.0, 4.0, -1.0}};
  if (k == n - 1)
    return {n - 4, 4, {-1.0, 4.0, -5.0, 2.0}};
  return {k - 1, 3, {1.0, -2.0, 1.0, 0.0}};
}

// d/dt: centered in the interior, three-point one-sided at the ends.
inline Taps first(Eigen::Index n, Eigen::Index k)
{
  if (k == 0)
    return {0, 3, {-1.5, 2.0, -0.5, 0.0}};
  if (k == n - 1)
    return {n - 3, 3, {0.5, -2.0, 1.5, 0.0}};
  return {k - 1, 3, {-0.5, 0.0, 0.5, 0.0}};
}

// Four-point one-sided first derivative at the left end (third order).
inline Taps first_left4() { return {0, 4, {-11.0 / 6.0, 3.0, -1.5, 1.0 / 3.0}}; }

template <typename Vec>
auto apply(const Taps& t, const Vec& f)
{
  auto s = t.c[0] * f[t.start];
  for (int m = 1; m < t.count; ++m)
    s += t.c[m] * f[t.start + m];
  return s;
}

// Deterministic pairwise sum of a contiguous range.
template <typename Scalar>
Scalar pairwise_sum(const Scalar* p, Eigen::Index n)
{
  if (n <= 8) {
    Scalar s(0);
    for (Eigen::Index k = 0; k < n; ++k)
      s += p[k];
    return s;
  }
  const Eigen::Index h = n / 2;
  return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

}  // namespace film::stencil
