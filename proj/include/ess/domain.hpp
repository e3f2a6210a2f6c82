#pragma once

// Scenario and solution types shared by every part of the scheduler.
//
// Time is divided into T one-hour intervals. Because an interval is exactly
// one hour, a power limit in kW equals an energy step in kWh and the two are
// used interchangeably throughout.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ess {

struct BatterySpec {
  double capacity = 0.0;         ///< usable capacity C, kWh
  double charge_limit = 0.0;     ///< P_c, kW (kWh per interval)
  double discharge_limit = 0.0;  ///< P_d, kW (kWh per interval)
  /// Nameplate capacity before the usable-window derating. Informational.
  std::optional<double> nominal_capacity;

  friend bool operator==(const BatterySpec&, const BatterySpec&) = default;
};

struct Tariff {
  std::vector<double> energy_price;  ///< cents/kWh, one entry per interval
  double demand_rate = 0.0;          ///< cents/kW applied to the day's peak draw

  friend bool operator==(const Tariff&, const Tariff&) = default;
};

enum class Season { summer, winter };
enum class Weather { sunny, cloudy };
enum class DayType { weekday, weekend };
enum class DemandLevel { low, high };

/// Descriptive labels carried alongside a scenario. None affect the cost.
struct ScenarioMeta {
  std::string name;
  std::optional<Season> season;
  std::optional<Weather> weather;
  std::optional<DayType> day_type;

  friend bool operator==(const ScenarioMeta&, const ScenarioMeta&) = default;
};

struct Scenario {
  ScenarioMeta meta;
  std::size_t horizon = 24;
  std::vector<double> load;        ///< l_i, kWh
  std::vector<double> generation;  ///< g_i, kWh
  Tariff tariff;
  BatterySpec battery;
  double initial_charge = 0.0;  ///< x_0, kWh
  /// Require the battery to end the day with at least x_0 stored.
  bool cyclic = false;
  /// Bill the demand term as peak * rate even when the peak is negative
  /// (every hour exporting). Off by default: the demand charge is floored at 0.
  bool literal_demand_formula = false;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Residual battery energy at the end of each interval, x_1 ... x_T.
/// The value before interval 1 is the scenario's initial_charge.
struct Schedule {
  std::vector<double> residual;

  [[nodiscard]] std::size_t size() const noexcept { return residual.size(); }
  [[nodiscard]] bool empty() const noexcept { return residual.empty(); }
  double& operator[](std::size_t i) { return residual[i]; }
  double operator[](std::size_t i) const { return residual[i]; }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct CostBreakdown {
  double energy_charge = 0.0;  ///< cents
  double demand_charge = 0.0;  ///< cents
  double total = 0.0;          ///< cents
  double peak_net = 0.0;       ///< kWh, max_i net_i (may be negative)
  std::vector<double> net_series;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  zero_horizon,
  length_mismatch,
  negative_value,
  non_finite,
  initial_charge_out_of_range,
};

struct Violation {
  ViolationKind kind;
  std::string field;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

  [[nodiscard]] const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string out = "invalid scenario:";
    for (const auto& v : vs) {
      out += "\n  ";
      out += v.field;
      out += ": ";
      out += v.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

namespace detail {

inline bool finite(double v) { return v == v && v - v == 0.0; }

inline void check_series(const std::vector<double>& values, std::size_t horizon, const char* field,
                         std::vector<Violation>& out) {
  if (values.size() != horizon) {
    out.push_back({ViolationKind::length_mismatch, field,
                   "expected " + std::to_string(horizon) + " entries, got " +
                       std::to_string(values.size())});
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
    if (!finite(values[i])) {
      out.push_back({ViolationKind::non_finite, where, "value is not finite"});
    } else if (values[i] < 0.0) {
      out.push_back({ViolationKind::negative_value, where, "must be >= 0"});
    }
  }
}

inline void check_scalar(double v, const char* field, std::vector<Violation>& out) {
  if (!finite(v)) {
    out.push_back({ViolationKind::non_finite, field, "value is not finite"});
  } else if (v < 0.0) {
    out.push_back({ViolationKind::negative_value, field, "must be >= 0"});
  }
}

}  // namespace detail

/// Every invariant violation in `s`, in field order. Empty means valid.
[[nodiscard]] inline std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  if (s.horizon == 0) {
    out.push_back({ViolationKind::zero_horizon, "horizon", "must be at least 1"});
  }
  detail::check_series(s.load, s.horizon, "load", out);
  detail::check_series(s.generation, s.horizon, "generation", out);
  detail::check_series(s.tariff.energy_price, s.horizon, "tariff.energy_price", out);
  detail::check_scalar(s.tariff.demand_rate, "tariff.demand_rate", out);
  detail::check_scalar(s.battery.capacity, "battery.capacity", out);
  detail::check_scalar(s.battery.charge_limit, "battery.charge_limit", out);
  detail::check_scalar(s.battery.discharge_limit, "battery.discharge_limit", out);

  if (!detail::finite(s.initial_charge)) {
    out.push_back({ViolationKind::non_finite, "initial_charge", "value is not finite"});
  } else if (s.initial_charge < 0.0 || s.initial_charge > s.battery.capacity) {
    out.push_back({ViolationKind::initial_charge_out_of_range, "initial_charge",
                   "must lie in [0, battery.capacity]"});
  }
  return out;
}

/// Returns `s` unchanged, or throws ValidationError listing every violation.
inline Scenario validated(Scenario s) {
  auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

}  // namespace ess
