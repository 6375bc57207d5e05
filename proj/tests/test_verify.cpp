#include <gtest/gtest.h>

#include <cmath>

#include "film/verify.hpp"

using namespace film;

TEST(Fit, ExactPowerLaw)
{
  std::vector<double> x, e;
  for (double s : log_spaced(1e-3, 1e-1, 6)) {
    x.push_back(s);
    e.push_back(3.0 * std::pow(s, 0.4));
  }
  const auto f = fit_power_law(x, e);
  EXPECT_NEAR(f.slope, 0.4, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Fit, ConstantTable)
{
  const auto f = fit_power_law({0.1, 0.2, 0.3, 0.4}, {2.0, 2.0, 2.0, 2.0});
  EXPECT_NEAR(f.slope, 0.0, 1e-14);
}

TEST(Fit, RejectsNonPositive)
{
  EXPECT_THROW(fit_power_law({0.1, 0.2, 0.3}, {1.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(fit_power_law({0.1, 0.1, 0.1}, {1.0, 2.0, 3.0}), DomainError);
}

TEST(Sweep, RegimeAAllFlat)
{
  SweepSpec s;
  s.axis = SweepAxis::curve;
  s.curve_power = -1.0;
  s.curve_coefficient = 2.0;
  s.values = {0.1, 0.05, 0.025};
  const auto t = run_sweep(s);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_LT(t.rows[0].sigma, t.rows[1].sigma);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.construction, ConstructionKind::flat);
    EXPECT_EQ(r.energy.total, 1.0);
    EXPECT_EQ(r.regime, RegimeLabel::A);
  }
  EXPECT_THROW(fit_exponent(t, FitCoordinate::sigma), DomainError);
}

TEST(Sweep, RegimeDBranchingDecreasesWithSigma)
{
  SweepSpec s;
  s.axis = SweepAxis::sigma;
  s.gamma = 0.0;
  s.construction = ConstructionKind::branching;
  s.values = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto t = run_sweep(s);
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    EXPECT_GT(t.rows[k].energy.total, t.rows[k - 1].energy.total);
}

TEST(Sweep, Rejections)
{
  SweepSpec s;
  EXPECT_THROW(run_sweep(s), DomainError);
  s.axis = SweepAxis::gamma;
  s.sigma = 0.01;
  s.values = {0.001, 1.0, 10.0, 200.0};
  EXPECT_THROW(run_sweep(s), DomainError);
}

TEST(Sweep, CsvHeader)
{
  SweepSpec s;
  s.axis = SweepAxis::gamma;
  s.sigma = 0.01;
  s.values = {200, 300, 400, 500};
  const auto csv = sweep_csv(run_sweep(s));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sigma,gamma,stretching,bending,bonding,total,regime,nx,ny,N,h0,deltaN");
}

TEST(Convergence, LaminateCellOrderTwo)
{
  LaminateCellSpec cell;
  const auto r = convergence_study("laminate_cell", {0.1, 1.0, 1.0, 1.0}, laminate_cell_ladder(cell, 12, 4), cell);
  EXPECT_EQ(r.reference, "closed_form");
  EXPECT_NEAR(r.order, 2.0, 0.5);
  EXPECT_LT(r.levels.front().error / r.reference_value, 0.02);
}

TEST(Convergence, FlatIsExact)
{
  const Params p{0.1, 1.0, 1.0, 1.0};
  const auto r = convergence_study("flat", p, domain_ladder(p, 9, 9, 3));
  EXPECT_TRUE(r.exact);
}

TEST(Convergence, RejectsUnderResolvedBranching)
{
  const Params p{0.01, 1.0, 1.0, 1.0};
  // finest fold half-width 0.01: 2 samples per delta_N
  EXPECT_THROW(convergence_study("branching", p, domain_ladder(p, 101, 201, 3)), DomainError);
}

TEST(Convergence, RejectsNonNested)
{
  const Params p{0.1, 1.0, 1.0, 1.0};
  std::vector<Grid> l{Grid::domain(p, 9, 9), Grid::domain(p, 12, 12), Grid::domain(p, 23, 23)};
  EXPECT_THROW(convergence_study("flat", p, l), DomainError);
  EXPECT_THROW(convergence_study("flat", p, domain_ladder(p, 9, 9, 2)), DomainError);
}

TEST(Sandwich, RegimeAIsExact)
{
  std::vector<Params> pts;
  for (double s : {0.3, 0.1, 0.03, 0.01, 0.003})
    pts.push_back({s, 2.0 / s, 1.0, 1.0});
  const auto r = sandwich_check(pts);
  for (double v : r.ratios)
    EXPECT_EQ(v, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(Sandwich, SinglePointPasses)
{
  const auto r = sandwich_check({{0.01, 200.0, 1.0, 1.0}});
  EXPECT_EQ(r.variation, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(Sandwich, RegimeDVariation)
{
  std::vector<Params> pts;
  for (int k = 4; k <= 8; ++k)
    pts.push_back({std::ldexp(1.0, -k), 0.0, 1.0, 1.0});
  const auto r = sandwich_check(pts);
  EXPECT_TRUE(r.pass) << r.variation;
}

TEST(Poincare, PassesAndIsDeterministic)
{
  const auto a = poincare_check(20, 5, 128);
  const auto b = poincare_check(20, 5, 128);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.ratios, b.ratios);
  EXPECT_LE(a.scale_deviation, 1e-12);
  EXPECT_THROW(poincare_check(0), DomainError);
}
