#include "film/schedule.hpp"

#include <cmath>

#include "film/errors.hpp"
#include "film/regimes.hpp"

namespace film {

std::string to_string(ScheduleCase c)
{
  switch (c) {
  case ScheduleCase::gamma_ge_1: return "gamma_ge_1";
  case ScheduleCase::gamma_lt_sigma: return "gamma_lt_sigma";
  case ScheduleCase::gamma_mid: return "gamma_mid";
  }
  return "unknown";
}

double BranchSchedule::cascade_width() const
{
  double w = eps;
  for (double l : L)
    w += 2.0 * l;
  return w;
}

BranchSchedule branch_schedule(const Params& p, std::optional<int> levels)
{
  p.validate();
  const double s = p.sigma, g = p.gamma, l1 = p.l1;
  if (g > power(s, {-4, 9}))
    throw DomainError("gamma > sigma^{-4/9}: branching needs gamma <= sigma^{-4/9} (gamma = " + std::to_string(g) +
                      ", sigma^{-4/9} = " + std::to_string(power(s, {-4, 9})) + ")");
  BranchSchedule b;
  double hN, dN;
  if (g >= 1.0) {
    b.regime_case = ScheduleCase::gamma_ge_1;
    hN = s * l1 * g;
    dN = s * l1;
    b.h0_nominal = l1 * power(s, {1, 4}) * power(g, {1, 16});
  } else {
    b.regime_case = g < s ? ScheduleCase::gamma_lt_sigma : ScheduleCase::gamma_mid;
    hN = dN = s * l1;
    b.h0_nominal = g < s ? power(s, {1, 2}) * l1 : l1 * power(s, {1, 4}) * power(g, {1, 16});
  }
  b.eps = hN;
  if (levels) {
    if (*levels < 0 || *levels > 60)
      throw DomainError("level count must lie in [0, 60]");
    b.N = *levels;
  } else {
    b.N = b.h0_nominal > hN ? static_cast<int>(std::floor(std::log2(b.h0_nominal / hN))) : 0;
  }
  const int N = b.N;
  b.h.resize(static_cast<std::size_t>(N) + 1);
  b.delta.resize(static_cast<std::size_t>(N) + 1);
  b.L.resize(static_cast<std::size_t>(N));
  const double sl = s * l1;
  for (int i = 0; i <= N; ++i)
    b.h[static_cast<std::size_t>(i)] = std::ldexp(hN, N - i);
  for (int i = 0; i < N; ++i) {
    const double h = b.h[static_cast<std::size_t>(i)];
    const double d = g > 0.0 ? std::min(h, std::pow(sl, 2.0 / 3.0) * std::pow(g, -1.0 / 3.0) * std::cbrt(h)) : h;
    b.delta[static_cast<std::size_t>(i)] = d;
    b.L[static_cast<std::size_t>(i)] = std::max(h, std::pow(sl, -0.5) * std::pow(d, 0.25) * std::pow(h, 1.25));
  }
  b.delta[static_cast<std::size_t>(N)] = dN;
  b.h0 = b.h.front();
  b.delta0 = b.delta.front();
  if (g > 0.0) {
    const double threshold = sl / std::sqrt(g);
    for (int i = 0; i < N; ++i)
      if (b.h[static_cast<std::size_t>(i)] >= threshold)
        b.switch_index = i;
  }
  return b;
}

}  // namespace film
