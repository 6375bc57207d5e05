#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "film/admissibility.hpp"
#include "film/constructions.hpp"
#include "film/serialize.hpp"

using namespace film;

TEST(Flat, UnitEnergyAndAdmissible)
{
  const Params p{0.2, 3.0, 1.0, 2.0};
  const auto f = flat_construction(p, Grid::domain(p, 33, 65));
  const auto e = evaluate_energy(f);
  EXPECT_NEAR(e.total, 2.0, 1e-13);
  EXPECT_EQ(e.bonding, 0.0);
  EXPECT_TRUE(check_admissible(f).ok());
}

TEST(Laminate, ScalesExample)
{
  const auto s = laminate_scales({0.01, 10.0, 1.0, 1.0});
  EXPECT_NEAR(s.h, std::pow(10.0, -0.4), 1e-14);
  EXPECT_NEAR(s.delta, std::pow(10.0, -1.8), 1e-15);
  EXPECT_EQ(s.eps, s.h);
}

TEST(Laminate, Hypotheses)
{
  EXPECT_THROW(laminate_scales({0.5, 3.0, 1.0, 1.0}), DomainError);  // sigma gamma > 1
  EXPECT_THROW(laminate_scales({0.01, 0.5, 1.0, 1.0}), DomainError); // gamma < 1
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ls(-4.0, -0.5);
  for (int k = 0; k < 50; ++k) {
    const double sigma = std::pow(10.0, ls(rng));
    const double gamma = std::pow(10.0, std::uniform_real_distribution<double>(0.0, -std::log10(sigma))(rng));
    const auto s = laminate_scales({sigma, gamma, 1.0, 1.0});
    EXPECT_LE(s.delta, s.h);
    EXPECT_LE(s.h, 1.0);
    EXPECT_LE(s.eps, 1.0);
  }
}

TEST(Laminate, BalancedDeltaFactor)
{
  EXPECT_NEAR(balanced_delta_factor(ProfileKind::cosine), std::cbrt(2.0 * M_PI * M_PI), 1e-9);
  Overrides o;
  o.delta_factor = 2.0;
  const Params p{0.01, 10.0, 1.0, 1.0};
  EXPECT_NEAR(laminate_scales(p, o).delta, 2.0 * laminate_scales(p).delta, 1e-16);
}

TEST(Laminate, BoundaryLayerTraces)
{
  const Params p{0.01, 10.0, 1.0, 1.0};
  const auto c = make_construction(ConstructionKind::laminate, p);
  const Grid g = Grid::domain(p, 129, 1025);
  const auto f = rasterize(c.layout, g);
  EXPECT_TRUE(check_admissible(f).ok()) << check_admissible(f).summary();
  for (Eigen::Index j = 0; j < g.ny; ++j) {
    EXPECT_EQ(f.u(0, j), 0.0);
    EXPECT_EQ(f.v(0, j), 0.0);
    EXPECT_EQ(f.w(0, j), 0.0);
  }
}

TEST(Schedule, GammaAtLeastOne)
{
  const auto b = branch_schedule({0.01, 1.0, 1.0, 1.0});
  EXPECT_EQ(b.regime_case, ScheduleCase::gamma_ge_1);
  EXPECT_NEAR(b.h0_nominal, std::pow(0.01, 0.25), 1e-12);
  EXPECT_NEAR(b.hN(), 0.01, 1e-15);
  EXPECT_EQ(b.N, 4);
  for (int i = 0; i <= b.N; ++i)
    if (i < b.N)
      EXPECT_NEAR(b.delta[i], std::pow(0.01, 2.0 / 3.0) * std::cbrt(b.h[i]), 1e-14);
}

TEST(Schedule, GammaBelowSigma)
{
  const auto b = branch_schedule({0.04, 1e-4, 1.0, 1.0});
  EXPECT_EQ(b.regime_case, ScheduleCase::gamma_lt_sigma);
  EXPECT_NEAR(b.h0_nominal, 0.2, 1e-14);
  EXPECT_NEAR(b.hN(), 0.04, 1e-15);
  EXPECT_NEAR(b.deltaN(), 0.04, 1e-15);
}

TEST(Schedule, RejectsLargeGamma)
{
  try {
    branch_schedule({0.01, 100.0, 1.0, 1.0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma > sigma^{-4/9}"), std::string::npos);
  }
}

TEST(Schedule, Invariants)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double sigma = std::pow(10.0, -4.0 + 3.5 * u(rng));
    const double gamma = std::pow(sigma, -4.0 / 9.0) * std::pow(10.0, -6.0 * u(rng));
    const auto b = branch_schedule({sigma, gamma, 1.0, 1.0});
    for (int i = 0; i < b.N; ++i) {
      EXPECT_DOUBLE_EQ(b.h[i + 1], b.h[i] / 2.0);
      EXPECT_LE(b.delta[i], b.h[i] * (1 + 1e-12));
      EXPECT_LE(b.h[i], b.L[i] * (1 + 1e-12));
      EXPECT_GE(b.delta[i + 1], b.delta[i] / 4.0 * (1 - 1e-12));
      EXPECT_LE(b.delta[i + 1], b.delta[i] * (1 + 1e-12));
    }
  }
}

TEST(Branching, FullFieldIsAdmissible)
{
  const Params p{0.01, 1.0, 1.0, 1.0};
  const auto c = make_construction(ConstructionKind::branching, p);
  const double fw = finest_width(c.layout);
  const auto ny = static_cast<Eigen::Index>(std::ceil(12.0 / fw)) + 1;
  const Grid g = Grid::domain(p, 801, ny);
  const auto f = branching_full(p, g);
  EXPECT_TRUE(check_admissible(f).ok()) << check_admissible(f).summary();
  const auto e = evaluate_energy(f);
  EXPECT_TRUE(std::isfinite(e.total));
  EXPECT_GT(e.bonding, 0.0);
}

TEST(Branching, RequiresResolution)
{
  const Params p{0.01, 1.0, 1.0, 1.0};
  const auto c = make_construction(ConstructionKind::branching, p);
  const double fw = finest_width(c.layout);
  const auto ny = static_cast<Eigen::Index>(std::ceil(2.0 / fw)) + 1;
  EXPECT_THROW(branching_full(p, Grid::domain(p, 801, ny)), DomainError);
}

TEST(Branching, RegimeDEnergyOverSigmaBounded)
{
  const Params p{0.04, 0.0, 1.0, 1.0};
  const auto c = make_construction(ConstructionKind::branching, p);
  const auto e = tiled_energy(c.layout);
  EXPECT_LT(e.energy.total / 0.04, 1000.0);
}

TEST(Lift, ZeroHeightIsIdentity)
{
  const Params p{0.01, 10.0, 1.0, 1.0};
  const auto c = make_construction(ConstructionKind::laminate, p);
  const auto l = buffer_lift(c.layout, 0.0);
  EXPECT_EQ(l.bands.size(), c.layout.bands.size());
  EXPECT_EQ(l.edge_height, 0.0);
}

TEST(Lift, WidthExample) { EXPECT_NEAR(lift_width({0.01, 4.0, 1.0, 1.0}, 1e-4), 1e-3 / std::sqrt(2.0), 1e-15); }

TEST(Lift, LiftedFieldIsAdmissible)
{
  const Params p{0.01, 4.0, 1.0, 1.0};
  const auto c = buffer_lift(make_construction(ConstructionKind::laminate, p), 1e-4);
  const auto f = rasterize(c.layout, Grid::domain(p, 4097, 1025));
  EXPECT_TRUE(check_admissible(f).ok()) << check_admissible(f).summary();
  EXPECT_EQ(f.w(0, 17), 1e-4);
  EXPECT_THROW(buffer_lift(c.layout, 0.5), DomainError);
}

TEST(Best, RegimeAPicksFlat)
{
  const auto s = best_construction({0.01, 200.0, 1.0, 1.0});
  EXPECT_EQ(s.construction.kind, ConstructionKind::flat);
  EXPECT_EQ(s.energy.energy.total, 1.0);
}

TEST(Best, RegimeDSmallSigmaPicksBranching)
{
  const auto s = best_construction({1e-4, 0.0, 1.0, 1.0});
  EXPECT_EQ(s.construction.kind, ConstructionKind::branching);
  EXPECT_LT(s.energy.energy.total, 1.0);
}

TEST(Serialize, SidecarHasSchedule)
{
  const auto c = make_construction(ConstructionKind::branching, {0.01, 1.0, 1.0, 1.0});
  const nlohmann::json j = c;
  EXPECT_EQ(j["construction"], "branching");
  EXPECT_EQ(j["schedule"]["N"], 4);
  EXPECT_TRUE(j.contains("layout"));
}
