#pragma once

// Price-blind reference strategies.

#include <algorithm>
#include <cmath>

#include "ess/cost.hpp"
#include "ess/domain.hpp"
#include "ess/feasibility.hpp"

namespace ess {

/// Net-power-based (NPB) schedule: store any generation surplus, cover any
/// deficit from storage, ignoring prices. Charging is capped by the charge
/// limit and remaining headroom, discharging by the discharge limit and the
/// stored energy.
[[nodiscard]] inline Schedule npb_schedule(const Scenario& s) {
  const auto& b = s.battery;
  Schedule x;
  x.residual.resize(s.horizon);
  double prev = s.initial_charge;
  for (std::size_t i = 0; i < s.horizon; ++i) {
    const double surplus = s.generation[i] - s.load[i];
    double next = prev;
    if (surplus > 0.0) {
      next = prev + std::min({b.charge_limit, surplus, b.capacity - prev});
      // storing the surplus must never turn an export hour into a billed import
      while (next > prev && next - prev + s.load[i] - s.generation[i] > 0.0) {
        next = std::nextafter(next, prev);
      }
    } else if (surplus < 0.0) {
      next = prev - std::min({b.discharge_limit, -surplus, prev});
    }
    // only binds for cyclic scenarios, which may forbid draining below a floor
    prev = x[i] = clamp_to_bounds(next, gene_bounds(s, i, prev));
  }
  return x;
}

[[nodiscard]] inline CostBreakdown npb_cost(const Scenario& s) { return evaluate(s, npb_schedule(s)); }

}  // namespace ess
