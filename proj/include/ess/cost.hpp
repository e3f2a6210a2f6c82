#pragma once

// Daily electricity bill for a battery schedule.
//
// For each interval the net grid draw is net_i = x_i - x_{i-1} + l_i - g_i.
// Exports (net_i <= 0) earn nothing. The bill is
//
//     sum_i [net_i > 0] * net_i * p_i   +   p* * max_i net_i
//
// with the demand term floored at zero unless the scenario asks for the
// literal expression.

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ess/domain.hpp"
#include "ess/feasibility.hpp"

namespace ess {

namespace detail {

inline double demand_term(const Scenario& s, double peak) noexcept {
  return s.tariff.demand_rate * (s.literal_demand_formula ? peak : std::max(0.0, peak));
}

inline CostBreakdown breakdown_from_net(const Scenario& s, std::vector<double> net) {
  CostBreakdown c;
  c.peak_net = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net[i] > 0.0) c.energy_charge += net[i] * s.tariff.energy_price[i];
    c.peak_net = std::max(c.peak_net, net[i]);
  }
  if (net.empty()) c.peak_net = 0.0;
  c.demand_charge = demand_term(s, c.peak_net);
  c.total = c.energy_charge + c.demand_charge;
  c.net_series = std::move(net);
  return c;
}

inline std::vector<double> net_unchecked(const Scenario& s, std::span<const double> genes) {
  std::vector<double> net(genes.size());
  double prev = s.initial_charge;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    net[i] = genes[i] - prev + s.load[i] - s.generation[i];
    prev = genes[i];
  }
  return net;
}

/// Total bill without feasibility checks or allocation. Hot path of the GA.
inline double total_cost_unchecked(const Scenario& s, std::span<const double> genes) noexcept {
  double energy = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  double prev = s.initial_charge;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    const double net = genes[i] - prev + s.load[i] - s.generation[i];
    if (net > 0.0) energy += net * s.tariff.energy_price[i];
    peak = std::max(peak, net);
    prev = genes[i];
  }
  if (genes.empty()) peak = 0.0;
  return energy + demand_term(s, peak);
}

inline CostBreakdown evaluate_unchecked(const Scenario& s, std::span<const double> genes) {
  return breakdown_from_net(s, net_unchecked(s, genes));
}

}  // namespace detail

/// Net grid draw per interval. Throws FeasibilityError for infeasible `x`.
[[nodiscard]] inline std::vector<double> net_series(const Scenario& s, const Schedule& x) {
  require_feasible(x, s);
  return detail::net_unchecked(s, x.residual);
}

/// Full bill for a feasible schedule. Throws FeasibilityError otherwise.
[[nodiscard]] inline CostBreakdown evaluate(const Scenario& s, const Schedule& x) {
  require_feasible(x, s);
  return detail::evaluate_unchecked(s, x.residual);
}

/// The bill with no battery at all: net_i = l_i - g_i.
[[nodiscard]] inline CostBreakdown no_ess_cost(const Scenario& s) {
  std::vector<double> net(s.horizon);
  for (std::size_t i = 0; i < s.horizon; ++i) net[i] = s.load[i] - s.generation[i];
  return detail::breakdown_from_net(s, std::move(net));
}

class UndefinedSavingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// 100 * (reference - algo) / reference. `reference` is normally the no-ESS bill.
[[nodiscard]] inline double saving_percent(double reference, double algo) {
  if (!(reference > 0.0)) {
    throw UndefinedSavingError("saving_percent: reference cost must be positive");
  }
  return 100.0 * (reference - algo) / reference;
}

}  // namespace ess
