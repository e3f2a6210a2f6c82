#pragma once

// Exact solver over a discretized state-of-charge grid, used to certify the
// quality of heuristic schedules.
//
// States are {0, d, 2d, ..., C}; when d does not divide C the top cell is
// truncated so that C itself is a state. A transition a -> b is allowed when
// -P_d <= b - a <= P_c (within kFeasibilityTolerance).
//
// The demand charge couples all intervals through max_i net_i, so plain
// stage-wise DP does not apply. Instead, for every candidate peak P (every
// net value some grid transition can produce) a stage-wise DP minimizes the
// energy charge subject to net_i <= P, and the answer is the best
// energy + demand over all candidates. The optimal schedule's own peak is one
// of the candidates, so the result is exact over grid schedules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ess/cost.hpp"
#include "ess/domain.hpp"
#include "ess/feasibility.hpp"

namespace ess {

enum class SnapMode { floor, nearest };

struct DpConfig {
  double grid_step = 0.05;  ///< kWh
  /// How an off-grid initial charge is moved onto the grid.
  SnapMode snap_mode = SnapMode::floor;
};

struct DpResult {
  Schedule schedule;
  CostBreakdown cost;
  /// Initial charge the grid solution starts from. Equals the scenario's
  /// unless it was off-grid and had to be snapped.
  double initial_charge = 0.0;
  double snap_distance = 0.0;
  std::size_t states = 0;
};

class ProblemSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Grid states for a battery of `capacity` kWh at spacing `step`.
[[nodiscard]] inline std::vector<double> grid_states(double capacity, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be positive");
  constexpr double eps = 1e-9;
  std::vector<double> states;
  for (std::size_t k = 0;; ++k) {
    const double v = static_cast<double>(k) * step;
    if (v > capacity + eps) break;
    states.push_back(std::abs(v - capacity) <= eps ? capacity : v);
    if (states.back() == capacity) break;
  }
  if (states.back() < capacity) states.push_back(capacity);
  return states;
}

namespace detail {

struct Grid {
  std::vector<double> values;
  double start = 0.0;
  double snap_distance = 0.0;
  Scenario effective;  ///< the input scenario with initial_charge = start
};

inline Grid make_grid(const Scenario& s, const DpConfig& cfg) {
  Grid g;
  g.values = grid_states(s.battery.capacity, cfg.grid_step);
  const double x0 = s.initial_charge;
  constexpr double on_grid = 1e-9;

  // index of the largest state <= x0 (with slack), then maybe the next one up
  auto it = std::upper_bound(g.values.begin(), g.values.end(), x0 + on_grid);
  std::size_t lo = it == g.values.begin() ? 0 : static_cast<std::size_t>(it - g.values.begin()) - 1;
  std::size_t pick = lo;
  if (cfg.snap_mode == SnapMode::nearest && lo + 1 < g.values.size() &&
      g.values[lo + 1] - x0 < x0 - g.values[lo]) {
    pick = lo + 1;
  }
  const double dist = std::abs(g.values[pick] - x0);
  // an x0 already on the grid (up to rounding) is used as given
  g.start = dist <= on_grid ? x0 : g.values[pick];
  g.snap_distance = dist <= on_grid ? 0.0 : dist;
  g.effective = s;
  g.effective.initial_charge = g.start;
  return g;
}

inline bool transition_allowed(const BatterySpec& b, double from, double to) noexcept {
  const double delta = to - from;
  return delta <= b.charge_limit + kFeasibilityTolerance &&
         delta >= -b.discharge_limit - kFeasibilityTolerance;
}

/// Same expression (and rounding) everywhere a net value is needed, so cap
/// comparisons against candidate peaks are exact.
inline double grid_net(const Scenario& s, std::size_t i, double from, double to) noexcept {
  return to - from + s.load[i] - s.generation[i];
}

inline bool terminal_ok(const Scenario& s, double value, double start) noexcept {
  return !s.cyclic || value >= start - kFeasibilityTolerance;
}

struct Arc {
  std::uint32_t from;  ///< predecessor state index (ignored at stage 0)
  std::uint32_t to;
  double net;
  double energy;  ///< cents
};

class PeakCapSolver {
 public:
  PeakCapSolver(const Scenario& s, const Grid& g) : s_(s), g_(g), arcs_(s.horizon) {
    const auto& v = g.values;
    const auto n = static_cast<std::uint32_t>(v.size());
    for (std::size_t i = 0; i < s.horizon; ++i) {
      const double price = s.tariff.energy_price[i];
      for (std::uint32_t to = 0; to < n; ++to) {
        if (i == 0) {
          if (transition_allowed(s.battery, g.start, v[to])) {
            const double net = grid_net(s, i, g.start, v[to]);
            arcs_[i].push_back({0, to, net, net > 0.0 ? net * price : 0.0});
          }
          continue;
        }
        for (std::uint32_t from = 0; from < n; ++from) {
          if (!transition_allowed(s.battery, v[from], v[to])) continue;
          const double net = grid_net(s, i, v[from], v[to]);
          arcs_[i].push_back({from, to, net, net > 0.0 ? net * price : 0.0});
        }
      }
    }
  }

  /// Distinct achievable per-interval net values, ascending.
  [[nodiscard]] std::vector<double> candidate_peaks() const {
    std::vector<double> peaks;
    for (const auto& stage : arcs_)
      for (const auto& a : stage) peaks.push_back(a.net);
    std::sort(peaks.begin(), peaks.end());
    peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
    return peaks;
  }

  /// Minimum energy charge with every net_i <= cap. Empty schedule if none.
  [[nodiscard]] std::pair<double, Schedule> solve(double cap) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = g_.values.size();
    const std::size_t horizon = s_.horizon;
    std::vector<double> best(n, inf);
    std::vector<double> next(n);
    std::vector<std::vector<std::uint32_t>> parent(horizon, std::vector<std::uint32_t>(n, 0));

    for (std::size_t i = 0; i < horizon; ++i) {
      std::fill(next.begin(), next.end(), inf);
      for (const auto& a : arcs_[i]) {
        if (a.net > cap) continue;
        const double base = i == 0 ? 0.0 : best[a.from];
        const double c = base + a.energy;
        if (c < next[a.to]) {
          next[a.to] = c;
          parent[i][a.to] = a.from;
        }
      }
      std::swap(best, next);
    }

    std::size_t arg = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!terminal_ok(s_, g_.values[j], g_.start)) continue;
      if (best[j] < inf && (arg == n || best[j] < best[arg])) arg = j;
    }
    if (arg == n) return {inf, {}};

    Schedule x;
    x.residual.resize(horizon);
    std::size_t state = arg;
    for (std::size_t i = horizon; i-- > 0;) {
      x[i] = g_.values[state];
      state = parent[i][state];
    }
    return {best[arg], std::move(x)};
  }

 private:
  const Scenario& s_;
  const Grid& g_;
  std::vector<std::vector<Arc>> arcs_;
};

inline DpResult finish(const Grid& g, Schedule x) {
  DpResult r;
  r.cost = evaluate_unchecked(g.effective, x.residual);
  r.schedule = std::move(x);
  r.initial_charge = g.start;
  r.snap_distance = g.snap_distance;
  r.states = g.values.size();
  return r;
}

}  // namespace detail

/// Minimum-cost schedule over all grid schedules.
[[nodiscard]] inline DpResult dp_solve(const Scenario& s, const DpConfig& cfg = {}) {
  const auto grid = detail::make_grid(s, cfg);
  const auto& eff = grid.effective;
  const detail::PeakCapSolver solver(eff, grid);
  const auto peaks = solver.candidate_peaks();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Uncapped DP gives the least energy charge any cap can achieve; it bounds
  // every candidate from below and ends the ascending scan early.
  auto [energy_floor, uncapped] = solver.solve(inf);
  if (uncapped.size() != s.horizon) {
    throw std::runtime_error("dp_solve: no grid schedule satisfies the constraints");
  }
  Schedule best_x = uncapped;
  double best_total = detail::total_cost_unchecked(eff, best_x.residual);
  if (eff.tariff.demand_rate == 0.0) return detail::finish(grid, std::move(best_x));

  // Feasibility is monotone in the cap: find the smallest workable one.
  std::size_t lo = 0;
  std::size_t hi = peaks.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (solver.solve(peaks[mid]).second.empty()) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  for (std::size_t k = lo; k < peaks.size(); ++k) {
    const double cap = peaks[k];
    if (energy_floor + detail::demand_term(eff, cap) >= best_total) break;
    auto [energy, x] = solver.solve(cap);
    if (x.empty()) continue;
    const double total = detail::total_cost_unchecked(eff, x.residual);
    if (total < best_total) {
      best_total = total;
      best_x = std::move(x);
    }
  }
  return detail::finish(grid, std::move(best_x));
}

/// Exhaustive enumeration of grid schedules. Limited to states^T <= 1e7.
[[nodiscard]] inline DpResult brute_force_solve(const Scenario& s, const DpConfig& cfg = {}) {
  const auto grid = detail::make_grid(s, cfg);
  const auto& eff = grid.effective;
  const auto& v = grid.values;
  const std::size_t horizon = s.horizon;

  constexpr double limit = 1e7;
  if (std::pow(static_cast<double>(v.size()), static_cast<double>(horizon)) > limit) {
    throw ProblemSizeError("brute_force_solve: " + std::to_string(v.size()) + "^" +
                           std::to_string(horizon) + " schedules exceeds 1e7");
  }

  Schedule current;
  current.residual.assign(horizon, 0.0);
  Schedule best_x;
  double best_total = std::numeric_limits<double>::infinity();

  // depth-first over feasible transitions; leaves are complete schedules
  auto visit = [&](auto&& self, std::size_t i, double prev) -> void {
    if (i == horizon) {
      if (!detail::terminal_ok(eff, prev, grid.start)) return;
      const double total = detail::total_cost_unchecked(eff, current.residual);
      if (total < best_total) {
        best_total = total;
        best_x = current;
      }
      return;
    }
    for (double next : v) {
      if (!detail::transition_allowed(eff.battery, prev, next)) continue;
      current[i] = next;
      self(self, i + 1, next);
    }
  };
  visit(visit, 0, grid.start);

  if (best_x.size() != horizon) {
    throw std::runtime_error("brute_force_solve: no grid schedule satisfies the constraints");
  }
  return detail::finish(grid, std::move(best_x));
}

}  // namespace ess
