#include <gtest/gtest.h>

#include <random>

#include "ess/baselines.hpp"
#include "ess/dp_oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace ess;

Scenario two_hour(double demand_rate) {
  auto s = fixtures::zero_scenario(2);
  s.load = {1.0, 1.0};
  s.tariff = {{5.0, 10.0}, demand_rate};
  return s;
}

TEST(GridStates, ExactMultiples) {
  const auto v = grid_states(1.8, 0.6);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_EQ(v[3], 1.8);
  EXPECT_EQ(grid_states(1.8, 0.05).size(), 37u);
  EXPECT_EQ(grid_states(1.8, 0.05).back(), 1.8);
}

TEST(GridStates, TruncatedTopCell) {
  const auto v = grid_states(1.0, 0.3);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_NEAR(v[3], 0.9, 1e-15);
  EXPECT_EQ(v[4], 1.0);
  EXPECT_EQ(grid_states(0.0, 0.1), std::vector<double>{0.0});
  EXPECT_THROW((void)grid_states(1.0, 0.0), std::invalid_argument);
}

TEST(DpSolve, ZeroScenario) {
  EXPECT_EQ(dp_solve(fixtures::zero_scenario()).cost.total, 0.0);
  EXPECT_EQ(brute_force_solve(fixtures::zero_scenario(3)).cost.total, 0.0);
}

// Expected values come from enumerating all 16 two-hour grid schedules.
TEST(DpSolve, TwoHourArbitrage) {
  const auto r = dp_solve(two_hour(0.0), {0.6});
  EXPECT_NEAR(r.cost.total, 12.0, 1e-9);
  EXPECT_EQ(r.schedule, (Schedule{{0.6, 0.0}}));
  EXPECT_EQ(r.states, 4u);
}

TEST(DpSolve, TwoHourWithDemandCharge) {
  const auto dp = dp_solve(two_hour(20.0), {0.6});
  const auto bf = brute_force_solve(two_hour(20.0), {0.6});
  EXPECT_NEAR(dp.cost.total, 35.0, 1e-9);
  EXPECT_NEAR(bf.cost.total, 35.0, 1e-9);
  EXPECT_EQ(dp.schedule, (Schedule{{0.0, 0.0}}));
}

TEST(DpSolve, OffGridInitialChargeIsSnapped) {
  auto s = two_hour(0.0);
  s.initial_charge = 0.7;
  const auto floor = dp_solve(s, {0.6, SnapMode::floor});
  EXPECT_EQ(floor.initial_charge, 0.6);
  EXPECT_NEAR(floor.snap_distance, 0.1, 1e-12);
  auto eff = s;
  eff.initial_charge = floor.initial_charge;
  EXPECT_TRUE(is_feasible(floor.schedule, eff));

  const auto nearest = dp_solve(s, {0.6, SnapMode::nearest});
  EXPECT_EQ(nearest.initial_charge, 0.6);
  s.initial_charge = 1.0;
  EXPECT_EQ(dp_solve(s, {0.6, SnapMode::nearest}).initial_charge, 1.2);
  EXPECT_EQ(dp_solve(s, {0.6, SnapMode::floor}).initial_charge, 0.6);
}

TEST(BruteForce, RejectsLargeInstances) {
  EXPECT_THROW((void)brute_force_solve(fixtures::zero_scenario(24), {0.05}), ProblemSizeError);
}

TEST(BruteForce, FlatPricesHaveNoArbitrage) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    auto s = fixtures::random_scenario(rng, 4);
    s.generation.assign(4, 0.0);
    s.tariff.energy_price.assign(4, 7.5);
    s.tariff.demand_rate = 0.0;
    EXPECT_NEAR(brute_force_solve(s, {0.6}).cost.total, no_ess_cost(s).total, 1e-9);
  }
}

// --- properties -----------------------------------------------------------

TEST(DpProperties, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 300; ++k) {
    auto s = fixtures::random_scenario(rng, 1 + k % 4);
    s.literal_demand_formula = k % 5 == 0;
    s.cyclic = k % 7 == 0;
    const double step = k % 2 == 0 ? 0.2 : 0.3;  // 10 and 7 states
    const auto dp = dp_solve(s, {step});
    const auto bf = brute_force_solve(s, {step});
    EXPECT_NEAR(dp.cost.total, bf.cost.total, 1e-9) << "instance " << k;
    EXPECT_TRUE(is_feasible(dp.schedule, s));
    EXPECT_NEAR(dp.cost.total, fixtures::reference_total(s, dp.schedule.residual), 1e-9);
  }
}

TEST(DpProperties, RefinementNeverHurts) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto s = fixtures::random_scenario(rng, 24);
    const double coarse = dp_solve(s, {0.3}).cost.total;
    const double mid = dp_solve(s, {0.15}).cost.total;
    const double fine = dp_solve(s, {0.075}).cost.total;
    EXPECT_LE(mid, coarse + 1e-9);
    EXPECT_LE(fine, mid + 1e-9);
  }
}

TEST(DpProperties, DominatesGridNpb) {
  // with 0.05 kWh states and a grid-aligned day, NPB moves stay on the grid
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> twentieths(0, 50);
  for (int k = 0; k < 20; ++k) {
    auto s = fixtures::random_scenario(rng, 24);
    for (std::size_t i = 0; i < 24; ++i) {
      s.load[i] = twentieths(rng) * 0.05;
      s.generation[i] = twentieths(rng) * 0.05;
    }
    const auto dp = dp_solve(s, {0.05});
    EXPECT_LE(dp.cost.total, npb_cost(s).total + 1e-9);
    EXPECT_TRUE(is_feasible(dp.schedule, s));
  }
}

TEST(DpProperties, CyclicEndsAtLeastInitial) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    auto s = fixtures::random_scenario(rng, 24);
    s.initial_charge = 0.9;
    s.cyclic = true;
    const auto r = dp_solve(s, {0.1});
    EXPECT_TRUE(is_feasible(r.schedule, s));
    EXPECT_GE(r.schedule.residual.back(), 0.9 - 1e-12);
  }
}

}  // namespace
