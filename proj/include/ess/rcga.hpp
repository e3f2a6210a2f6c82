#pragma once

// Real-coded genetic algorithm for battery scheduling.
//
// A chromosome is the residual-energy vector x_1..x_T. Every operator builds
// genes left to right and keeps each gene inside the feasible interval
// implied by its left neighbour, so no individual is ever infeasible.
//
// One generation: shuffle the population into N/2 disjoint pairs, produce one
// offspring per pair (BLX-alpha restricted to the feasible interval, then
// Gaussian mutation with cascade repair), and keep the best N of the N + N/2
// parents and offspring.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ess/cost.hpp"
#include "ess/domain.hpp"
#include "ess/feasibility.hpp"
#include "ess/rng.hpp"

#ifndef NDEBUG
#define ESS_ASSERT_FEASIBLE(schedule, scenario) assert(::ess::is_feasible((schedule), (scenario)))
#else
#define ESS_ASSERT_FEASIBLE(schedule, scenario) ((void)0)
#endif

namespace ess {

struct RcgaConfig {
  std::size_t population = 100;
  std::size_t generations = 2000;
  double alpha = 0.5;
  /// Per-gene mutation probability. Unset means 0.1 / T.
  std::optional<double> mutation_rate;
  std::uint64_t seed = 1;
  /// Evaluate offspring on worker threads. Results are identical either way.
  bool parallel_fitness = false;
  /// Worker count for parallel_fitness; 0 picks hardware_concurrency().
  unsigned workers = 0;

  [[nodiscard]] double mutation_rate_for(std::size_t horizon) const {
    return mutation_rate.value_or(0.1 / static_cast<double>(horizon));
  }
};

inline void validate_config(const RcgaConfig& cfg, std::size_t horizon) {
  if (cfg.population < 2 || cfg.population % 2 != 0) {
    throw std::invalid_argument("population must be even and at least 2, got " +
                                std::to_string(cfg.population));
  }
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  const double pm = cfg.mutation_rate_for(horizon);
  if (!(pm >= 0.0 && pm <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0, 1]");
}

struct Individual {
  Schedule genes;
  /// Cached total cost in cents. NaN until evaluated.
  double fitness = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] bool evaluated() const noexcept { return !std::isnan(fitness); }
};

using Population = std::vector<Individual>;

inline void evaluate_individual(Individual& ind, const Scenario& s) {
  ind.fitness = detail::total_cost_unchecked(s, ind.genes.residual);
}

/// Evaluates every individual in `inds`, optionally across threads. Each slot
/// is written by exactly one worker, so the result does not depend on timing.
inline void evaluate_all(std::span<Individual> inds, const Scenario& s, bool parallel,
                         unsigned workers = 0) {
  if (!parallel || inds.size() < 2) {
    for (auto& ind : inds) evaluate_individual(ind, s);
    return;
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, inds.size()));
  const std::size_t chunk = (inds.size() + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t begin = 0; begin < inds.size(); begin += chunk) {
    const auto part = inds.subspan(begin, std::min(chunk, inds.size() - begin));
    pool.emplace_back([part, &s] {
      for (auto& ind : part) evaluate_individual(ind, s);
    });
  }
}

/// N random schedules, each gene uniform on its feasible interval. Not evaluated.
[[nodiscard]] inline Population initialize_population(const Scenario& s, const RcgaConfig& cfg, Rng& rng) {
  Population pop(cfg.population);
  for (auto& ind : pop) {
    ind.genes.residual.resize(s.horizon);
    double prev = s.initial_charge;
    for (std::size_t i = 0; i < s.horizon; ++i) {
      const auto b = gene_bounds(s, i, prev);
      prev = ind.genes[i] = uniform_in(rng, b.lower, b.upper);
    }
    ESS_ASSERT_FEASIBLE(ind.genes, s);
  }
  return pop;
}

/// The sampling interval for one offspring gene: the BLX-alpha window around
/// the parents' genes, intersected with the feasible interval. When the two do
/// not overlap, the feasible interval alone.
[[nodiscard]] inline GeneBounds blx_interval(double gene_a, double gene_b, double alpha,
                                             const GeneBounds& feasible) noexcept {
  const double lo = std::min(gene_a, gene_b);
  const double hi = std::max(gene_a, gene_b);
  const double spread = alpha * (hi - lo);
  GeneBounds g{std::max(feasible.lower, lo - spread), std::min(feasible.upper, hi + spread)};
  if (g.lower > g.upper) return feasible;
  return g;
}

/// One offspring of `a` and `b`. Genes are drawn left to right, each window
/// anchored on the offspring's own previous gene. Not evaluated.
[[nodiscard]] inline Individual blx_crossover(const Individual& a, const Individual& b, const Scenario& s,
                                              double alpha, Rng& rng) {
  Individual child;
  child.genes.residual.resize(s.horizon);
  double prev = s.initial_charge;
  for (std::size_t i = 0; i < s.horizon; ++i) {
    const auto window = blx_interval(a.genes[i], b.genes[i], alpha, gene_bounds(s, i, prev));
    prev = child.genes[i] = uniform_in(rng, window.lower, window.upper);
  }
  ESS_ASSERT_FEASIBLE(child.genes, s);
  return child;
}

/// Gaussian mutation with cascade repair, in one left-to-right pass.
///
/// Each gene mutates with probability `rate`, adding N(0, sigma) where sigma
/// is the width of its feasible interval given the current left neighbour.
/// Every gene (mutated or not) is then clamped into that interval, which
/// repairs anything a change further left made infeasible. Invalidates fitness.
inline void gaussian_mutate(Individual& ind, const Scenario& s, double rate, Rng& rng) {
  std::bernoulli_distribution fires(rate);
  double prev = s.initial_charge;
  for (std::size_t i = 0; i < s.horizon; ++i) {
    const auto b = gene_bounds(s, i, prev);
    double v = ind.genes[i];
    if (fires(rng) && b.width() > 0.0) {
      std::normal_distribution<double> noise(0.0, b.width());
      v += noise(rng);
    }
    prev = ind.genes[i] = clamp_to_bounds(v, b);
  }
  ind.fitness = std::numeric_limits<double>::quiet_NaN();
  ESS_ASSERT_FEASIBLE(ind.genes, s);
}

/// One generation of (N + N/2) survivor selection. `pop` must be evaluated.
/// The returned population is sorted by ascending cost; ties keep parents
/// ahead of offspring and otherwise preserve order.
[[nodiscard]] inline Population step_generation(Population pop, const Scenario& s, const RcgaConfig& cfg,
                                                Rng& rng) {
  const std::size_t n = pop.size();
  const double rate = cfg.mutation_rate_for(s.horizon);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  Population offspring;
  offspring.reserve(n / 2);
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    auto child = blx_crossover(pop[order[k]], pop[order[k + 1]], s, cfg.alpha, rng);
    gaussian_mutate(child, s, rate, rng);
    offspring.push_back(std::move(child));
  }
  evaluate_all(offspring, s, cfg.parallel_fitness, cfg.workers);

  pop.reserve(n + offspring.size());
  std::move(offspring.begin(), offspring.end(), std::back_inserter(pop));
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& l, const Individual& r) { return l.fitness < r.fitness; });
  pop.resize(n);
  return pop;
}

struct RcgaResult {
  Individual best;
  /// Best cost after initialization, then after each generation.
  std::vector<double> trace;
};

[[nodiscard]] inline RcgaResult run_rcga(const Scenario& s, const RcgaConfig& cfg) {
  validate_config(cfg, s.horizon);
  auto rng = make_rng(cfg.seed);

  auto pop = initialize_population(s, cfg, rng);
  evaluate_all(pop, s, cfg.parallel_fitness, cfg.workers);
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& l, const Individual& r) { return l.fitness < r.fitness; });

  RcgaResult result;
  result.trace.reserve(cfg.generations + 1);
  result.trace.push_back(pop.front().fitness);
  for (std::size_t g = 0; g < cfg.generations; ++g) {
    pop = step_generation(std::move(pop), s, cfg, rng);
    result.trace.push_back(pop.front().fitness);
  }
  result.best = std::move(pop.front());
  return result;
}

}  // namespace ess
