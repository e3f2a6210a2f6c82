#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ess/rcga.hpp"
#include "test_support.hpp"

namespace {

using namespace ess;

RcgaConfig small_config(std::uint64_t seed = 1) {
  RcgaConfig cfg;
  cfg.population = 20;
  cfg.generations = 50;
  cfg.seed = seed;
  return cfg;
}

Individual evaluated(Schedule x, const Scenario& s) {
  Individual ind{std::move(x)};
  evaluate_individual(ind, s);
  return ind;
}

TEST(RcgaConfig, Defaults) {
  const RcgaConfig cfg;
  EXPECT_EQ(cfg.population, 100u);
  EXPECT_EQ(cfg.generations, 2000u);
  EXPECT_EQ(cfg.alpha, 0.5);
  EXPECT_DOUBLE_EQ(cfg.mutation_rate_for(24), 0.1 / 24);
  EXPECT_FALSE(cfg.parallel_fitness);
}

TEST(RcgaConfig, Validation) {
  RcgaConfig cfg;
  cfg.population = 7;
  EXPECT_THROW(validate_config(cfg, 24), std::invalid_argument);
  cfg.population = 0;
  EXPECT_THROW(validate_config(cfg, 24), std::invalid_argument);
  cfg.population = 2;
  EXPECT_NO_THROW(validate_config(cfg, 24));
  cfg.mutation_rate = 1.5;
  EXPECT_THROW(validate_config(cfg, 24), std::invalid_argument);
  cfg.mutation_rate = 1.0;
  cfg.alpha = -0.1;
  EXPECT_THROW(validate_config(cfg, 24), std::invalid_argument);
}

TEST(Initialize, ZeroCapacityGivesZeroSchedules) {
  auto s = fixtures::zero_scenario();
  s.battery.capacity = 0.0;
  auto rng = make_rng(1);
  for (const auto& ind : initialize_population(s, RcgaConfig{}, rng)) {
    for (double g : ind.genes.residual) EXPECT_EQ(g, 0.0);
  }
}

TEST(Initialize, GenesWithinPaperBattery) {
  std::mt19937_64 gen(5);
  const auto s = fixtures::random_scenario(gen);
  auto rng = make_rng(9);
  const auto pop = initialize_population(s, RcgaConfig{}, rng);
  ASSERT_EQ(pop.size(), 100u);
  for (const auto& ind : pop) {
    double prev = 0.0;
    for (double g : ind.genes.residual) {
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, 1.8);
      EXPECT_LE(g - prev, 0.6 + 1e-12);
      EXPECT_GE(g - prev, -0.6 - 1e-12);
      prev = g;
    }
  }
}

TEST(Initialize, Deterministic) {
  std::mt19937_64 gen(5);
  const auto s = fixtures::random_scenario(gen);
  auto a = make_rng(3);
  auto b = make_rng(3);
  const auto pa = initialize_population(s, RcgaConfig{}, a);
  const auto pb = initialize_population(s, RcgaConfig{}, b);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i].genes, pb[i].genes);
}

TEST(BlxInterval, IntersectsWithFeasible) {
  // both parents at 0.6, offspring's previous gene 0: window collapses to 0.6
  const auto w = blx_interval(0.6, 0.6, 0.5, gene_bounds(0.0, builtin_battery()));
  EXPECT_EQ(w.lower, 0.6);
  EXPECT_EQ(w.upper, 0.6);

  const auto wide = blx_interval(0.2, 0.4, 0.5, GeneBounds{0.0, 1.8});
  EXPECT_NEAR(wide.lower, 0.1, 1e-15);
  EXPECT_NEAR(wide.upper, 0.5, 1e-15);
}

TEST(BlxInterval, EmptyIntersectionFallsBackToFeasible) {
  const GeneBounds feasible{1.2, 1.8};
  EXPECT_EQ(blx_interval(0.1, 0.2, 0.5, feasible), feasible);
  EXPECT_EQ(blx_interval(0.0, 0.0, 0.0, feasible), feasible);
}

TEST(BlxCrossover, IdenticalParentsAlphaZero) {
  std::mt19937_64 gen(6);
  const auto s = fixtures::random_scenario(gen);
  const auto parent = evaluated(fixtures::random_feasible(s, gen), s);
  auto rng = make_rng(1);
  const auto child = blx_crossover(parent, parent, s, 0.0, rng);
  EXPECT_EQ(child.genes, parent.genes);
  EXPECT_FALSE(child.evaluated());
}

TEST(BlxCrossover, ChildInsideBlxWindowWhenOverlapping) {
  std::mt19937_64 gen(7);
  auto rng = make_rng(2);
  for (int k = 0; k < 2000; ++k) {
    const auto s = fixtures::random_scenario(gen, 24, true);
    const auto a = evaluated(fixtures::random_feasible(s, gen), s);
    const auto b = evaluated(fixtures::random_feasible(s, gen), s);
    const auto child = blx_crossover(a, b, s, 0.5, rng);
    double prev = s.initial_charge;
    for (std::size_t i = 0; i < 24; ++i) {
      const auto feas = gene_bounds(s, i, prev);
      EXPECT_TRUE(feas.contains(child.genes[i]));
      const double lo = std::min(a.genes[i], b.genes[i]);
      const double hi = std::max(a.genes[i], b.genes[i]);
      const double lo_w = lo - 0.5 * (hi - lo);
      const double hi_w = hi + 0.5 * (hi - lo);
      if (std::max(lo_w, feas.lower) <= std::min(hi_w, feas.upper)) {
        EXPECT_GE(child.genes[i], lo_w);
        EXPECT_LE(child.genes[i], hi_w);
      }
      prev = child.genes[i];
    }
  }
}

TEST(GaussianMutate, ZeroRateLeavesIndividual) {
  std::mt19937_64 gen(8);
  const auto s = fixtures::random_scenario(gen);
  auto ind = evaluated(fixtures::random_feasible(s, gen), s);
  const auto before = ind.genes;
  auto rng = make_rng(1);
  gaussian_mutate(ind, s, 0.0, rng);
  EXPECT_EQ(ind.genes, before);
}

TEST(GaussianMutate, ZeroCapacityUnchanged) {
  auto s = fixtures::zero_scenario();
  s.battery.capacity = 0.0;
  Individual ind{Schedule{std::vector<double>(24, 0.0)}};
  auto rng = make_rng(1);
  gaussian_mutate(ind, s, 1.0, rng);
  for (double g : ind.genes.residual) EXPECT_EQ(g, 0.0);
}

TEST(GaussianMutate, FullRateMovesGenesAndStaysFeasible) {
  std::mt19937_64 gen(9);
  const auto s = fixtures::random_scenario(gen);
  auto ind = evaluated(fixtures::random_feasible(s, gen), s);
  const auto before = ind.genes;
  auto rng = make_rng(4);
  gaussian_mutate(ind, s, 1.0, rng);
  EXPECT_NE(ind.genes, before);
  EXPECT_TRUE(is_feasible(ind.genes, s));
  EXPECT_FALSE(ind.evaluated());
}

TEST(StepGeneration, KeepsSizeSortedAndElitist) {
  std::mt19937_64 gen(10);
  const auto s = fixtures::random_scenario(gen);
  auto cfg = small_config();
  auto rng = make_rng(cfg.seed);
  auto pop = initialize_population(s, cfg, rng);
  evaluate_all(pop, s, false);
  std::stable_sort(pop.begin(), pop.end(), [](auto& l, auto& r) { return l.fitness < r.fitness; });
  double best = pop.front().fitness;
  for (int g = 0; g < 100; ++g) {
    const auto parents = pop;
    pop = step_generation(std::move(pop), s, cfg, rng);
    ASSERT_EQ(pop.size(), cfg.population);
    EXPECT_LE(pop.front().fitness, best);
    best = pop.front().fitness;
    for (std::size_t i = 1; i < pop.size(); ++i) EXPECT_LE(pop[i - 1].fitness, pop[i].fitness);
    // no discarded parent beats the worst survivor
    for (const auto& p : parents) {
      const bool kept = std::any_of(pop.begin(), pop.end(), [&](auto& q) { return q.genes == p.genes; });
      if (!kept) {
        EXPECT_GE(p.fitness, pop.back().fitness);
      }
    }
    for (const auto& ind : pop) {
      ASSERT_TRUE(is_feasible(ind.genes, s));
      EXPECT_NEAR(ind.fitness, fixtures::reference_total(s, ind.genes.residual), 1e-9);
    }
  }
}

TEST(StepGeneration, TiesKeepParentsFirst) {
  // zero-cost scenario: every schedule ties, so the parents must all survive
  const auto s = fixtures::zero_scenario();
  auto cfg = small_config();
  auto rng = make_rng(2);
  auto pop = initialize_population(s, cfg, rng);
  evaluate_all(pop, s, false);
  const auto parents = pop;
  pop = step_generation(std::move(pop), s, cfg, rng);
  for (std::size_t i = 0; i < pop.size(); ++i) EXPECT_EQ(pop[i].genes, parents[i].genes);
}

TEST(Run, ZeroScenarioCostsNothing) {
  const auto res = run_rcga(fixtures::zero_scenario(), small_config());
  EXPECT_EQ(res.best.fitness, 0.0);
}

TEST(Run, ZeroGenerationsReturnsBestInitial) {
  std::mt19937_64 gen(12);
  const auto s = fixtures::random_scenario(gen);
  auto cfg = small_config(5);
  cfg.generations = 0;
  const auto res = run_rcga(s, cfg);
  ASSERT_EQ(res.trace.size(), 1u);

  auto rng = make_rng(5);
  auto pop = initialize_population(s, cfg, rng);
  evaluate_all(pop, s, false);
  const auto best = std::min_element(pop.begin(), pop.end(), [](auto& l, auto& r) { return l.fitness < r.fitness; });
  EXPECT_EQ(res.best.genes, best->genes);
}

TEST(Run, TraceMonotoneAndDeterministic) {
  std::mt19937_64 gen(13);
  const auto s = fixtures::random_scenario(gen);
  auto cfg = small_config(77);
  cfg.generations = 300;
  const auto a = run_rcga(s, cfg);
  cfg.parallel_fitness = true;
  cfg.workers = 3;
  const auto b = run_rcga(s, cfg);
  ASSERT_EQ(a.trace.size(), 301u);
  for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_LE(a.trace[i], a.trace[i - 1]);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best.genes, b.best.genes);
  EXPECT_EQ(a.best.fitness, evaluate(s, a.best.genes).total);
}

TEST(Run, ImprovesOnInitialPopulation) {
  std::mt19937_64 gen(14);
  const auto s = fixtures::random_scenario(gen);
  auto cfg = small_config(3);
  cfg.population = 100;
  cfg.generations = 500;
  const auto res = run_rcga(s, cfg);
  EXPECT_LT(res.trace.back(), res.trace.front());
}

TEST(Run, CyclicScenarioEndsRecharged) {
  auto s = synthetic_scenario(Season::winter, Weather::sunny, DayType::weekday, DemandLevel::high, 4);
  s.initial_charge = 1.2;
  s.cyclic = true;
  auto cfg = small_config(8);
  cfg.generations = 200;
  const auto res = run_rcga(s, cfg);
  EXPECT_TRUE(is_feasible(res.best.genes, s));
  EXPECT_GE(res.best.genes.residual.back(), 1.2);
}

}  // namespace
