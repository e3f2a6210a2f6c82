#pragma once

// Per-gene feasible intervals and the clamp/cascade repair built on them.
//
// Gene i (0-based) is the residual energy at the end of interval i+1. Given its
// left neighbour `prev` it must satisfy
//
//     max(0, prev - P_d) <= x_i <= min(C, prev + P_c)
//
// which encodes both the capacity bounds and the per-interval power limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "ess/domain.hpp"

namespace ess {

inline constexpr double kFeasibilityTolerance = 1e-12;

struct GeneBounds {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] double width() const noexcept { return upper - lower; }
  [[nodiscard]] bool contains(double v) const noexcept { return lower <= v && v <= upper; }

  friend bool operator==(const GeneBounds&, const GeneBounds&) = default;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  /// 0-based index of the first offending gene.
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Feasible interval for a gene whose left neighbour holds `prev` kWh.
[[nodiscard]] inline GeneBounds gene_bounds(double prev, const BatterySpec& b) {
  if (!(prev >= 0.0 && prev <= b.capacity)) {
    throw PreconditionError("gene_bounds: previous residual " + std::to_string(prev) +
                            " outside [0, " + std::to_string(b.capacity) + "]");
  }
  return {std::max(0.0, prev - b.discharge_limit), std::min(b.capacity, prev + b.charge_limit)};
}

/// Feasible interval for gene `index` of a schedule for `s`.
///
/// Identical to gene_bounds() except for cyclic scenarios, where the lower
/// bound is raised so the battery can still climb back to x_0 by the last
/// interval. No precondition check; `prev` is assumed feasible.
[[nodiscard]] inline GeneBounds gene_bounds(const Scenario& s, std::size_t index, double prev) noexcept {
  const auto& b = s.battery;
  GeneBounds g{std::max(0.0, prev - b.discharge_limit), std::min(b.capacity, prev + b.charge_limit)};
  if (s.cyclic) {
    const auto remaining = static_cast<double>(s.horizon - 1 - index);
    g.lower = std::max(g.lower, s.initial_charge - remaining * b.charge_limit);
    // rounding in the floor computation can cross the upper bound by an ulp
    if (g.lower > g.upper) g.lower = g.upper;
  }
  return g;
}

/// `value` if inside `bounds`, otherwise the nearer endpoint. An exact tie
/// goes to the lower endpoint.
[[nodiscard]] inline double clamp_to_bounds(double value, const GeneBounds& bounds) noexcept {
  if (value >= bounds.lower && value <= bounds.upper) return value;
  if (std::isnan(value)) return bounds.lower;
  const double to_lower = std::abs(value - bounds.lower);
  const double to_upper = std::abs(value - bounds.upper);
  return to_upper < to_lower ? bounds.upper : bounds.lower;
}

namespace detail {

/// Clamps genes[first..] left to right against their (repaired) neighbours.
inline void repair_in_place(std::span<double> genes, std::size_t first, const Scenario& s) noexcept {
  for (std::size_t i = first; i < genes.size(); ++i) {
    const double prev = i == 0 ? s.initial_charge : genes[i - 1];
    const auto g = gene_bounds(s, i, prev);
    // rounding noise that is_feasible() accepts is left alone
    const double v = genes[i];
    if (v >= g.lower - kFeasibilityTolerance && v <= g.upper + kFeasibilityTolerance && v >= 0.0 &&
        v <= s.battery.capacity) {
      continue;
    }
    genes[i] = clamp_to_bounds(v, g);
  }
}

}  // namespace detail

/// Cascade repair: genes before `first` (0-based) are kept; every gene from
/// `first` on is clamped into the interval implied by its left neighbour.
/// `repair_suffix(x, 0, s)` makes any schedule of the right length feasible.
[[nodiscard]] inline Schedule repair_suffix(Schedule x, std::size_t first, const Scenario& s) {
  detail::repair_in_place(x.residual, first, s);
  return x;
}

struct FeasibilityReport {
  bool feasible = true;
  std::optional<std::size_t> first_violation;  ///< 0-based gene index
  std::string reason;

  explicit operator bool() const noexcept { return feasible; }
};

/// Checks capacity and power-limit constraints (plus the terminal floor for
/// cyclic scenarios) within kFeasibilityTolerance.
[[nodiscard]] inline FeasibilityReport is_feasible(const Schedule& x, const Scenario& s) {
  constexpr double tol = kFeasibilityTolerance;
  const auto fail = [](std::size_t i, std::string why) {
    return FeasibilityReport{false, i, std::move(why)};
  };
  if (x.size() != s.horizon) {
    return fail(std::min(x.size(), s.horizon),
                "schedule has " + std::to_string(x.size()) + " entries, horizon is " +
                    std::to_string(s.horizon));
  }
  const auto& b = s.battery;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double prev = i == 0 ? s.initial_charge : x[i - 1];
    const double delta = x[i] - prev;
    if (!(x[i] >= -tol && x[i] <= b.capacity + tol)) {
      return fail(i, "residual " + std::to_string(x[i]) + " outside [0, capacity] at index " +
                         std::to_string(i));
    }
    if (!(delta <= b.charge_limit + tol)) {
      return fail(i, "charge step " + std::to_string(delta) + " exceeds charge limit at index " +
                         std::to_string(i));
    }
    if (!(delta >= -b.discharge_limit - tol)) {
      return fail(i, "discharge step " + std::to_string(-delta) +
                         " exceeds discharge limit at index " + std::to_string(i));
    }
  }
  if (s.cyclic && !x.residual.empty() && x.residual.back() < s.initial_charge - tol) {
    return fail(x.size() - 1, "cyclic scenario ends below the initial charge");
  }
  return {};
}

/// Throws FeasibilityError naming the first violating index.
inline void require_feasible(const Schedule& x, const Scenario& s) {
  auto report = is_feasible(x, s);
  if (!report) throw FeasibilityError(*report.first_violation, "infeasible schedule: " + report.reason);
}

}  // namespace ess
