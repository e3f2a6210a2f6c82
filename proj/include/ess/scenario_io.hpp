#pragma once

// Scenario documents, built-in tariffs and battery, and synthetic profiles.
//
// Scenario document (JSON, format_version 1):
//
//   {
//     "format_version": 1,                       required, must be 1
//     "name": "summer-sunny",                    optional string
//     "season": "summer" | "winter",             optional
//     "weather": "sunny" | "cloudy",             optional
//     "day_type": "weekday" | "weekend",         optional
//     "horizon": 24,                             optional, defaults to len(load)
//     "load": [kWh, ...],                        required
//     "generation": [kWh, ...],                  required
//     "tariff": {"energy_price": [...], "demand_rate": 20.0}
//             | {"builtin": "summer" | "winter", "demand_level": "low" | "high"},
//     "battery": {"capacity": 1.8, "charge_limit": 0.6, "discharge_limit": 0.6,
//                 "nominal_capacity": 2.0 (optional)} | "builtin",
//     "initial_charge": 0.0,                     optional, default 0
//     "cyclic": false,                           optional
//     "literal_demand_formula": false            optional
//   }
//
// Unknown keys are rejected. write_scenario() always emits the inline forms
// with shortest round-trip number formatting, so parse(write(s)) == s.
//
// Profile CSV: header `hour,load_kwh,gen_kwh`, then one row per hour with
// hours 0, 1, 2, ... in order.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ess/domain.hpp"
#include "ess/rng.hpp"

namespace ess {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline constexpr int kScenarioFormatVersion = 1;
inline constexpr std::size_t kHoursPerDay = 24;

// ---------------------------------------------------------------------------
// Enum names

inline std::string_view to_string(Season v) { return v == Season::summer ? "summer" : "winter"; }
inline std::string_view to_string(Weather v) { return v == Weather::sunny ? "sunny" : "cloudy"; }
inline std::string_view to_string(DayType v) { return v == DayType::weekday ? "weekday" : "weekend"; }
inline std::string_view to_string(DemandLevel v) { return v == DemandLevel::low ? "low" : "high"; }

template <class Enum>
std::optional<Enum> enum_from_string(std::string_view s);

template <>
inline std::optional<Season> enum_from_string<Season>(std::string_view s) {
  if (s == "summer") return Season::summer;
  if (s == "winter") return Season::winter;
  return std::nullopt;
}
template <>
inline std::optional<Weather> enum_from_string<Weather>(std::string_view s) {
  if (s == "sunny") return Weather::sunny;
  if (s == "cloudy") return Weather::cloudy;
  return std::nullopt;
}
template <>
inline std::optional<DayType> enum_from_string<DayType>(std::string_view s) {
  if (s == "weekday") return DayType::weekday;
  if (s == "weekend") return DayType::weekend;
  return std::nullopt;
}
template <>
inline std::optional<DemandLevel> enum_from_string<DemandLevel>(std::string_view s) {
  if (s == "low") return DemandLevel::low;
  if (s == "high") return DemandLevel::high;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-ins

/// Three-level time-of-use prices in cents/kWh; entry h covers hour h..h+1.
/// Off-peak 5 overnight (0-7, 19-24). Summer peaks at midday (15 for 11-17,
/// 10 shoulders at 7-11 and 17-19); winter swaps the two upper levels.
[[nodiscard]] inline Tariff builtin_tariff(Season season, DemandLevel level) {
  constexpr std::array<double, kHoursPerDay> summer{5,  5,  5,  5,  5,  5,  5, 10, 10, 10, 10, 15,
                                                    15, 15, 15, 15, 15, 10, 10, 5,  5,  5,  5,  5};
  constexpr std::array<double, kHoursPerDay> winter{5,  5,  5,  5,  5,  5,  5, 15, 15, 15, 15, 10,
                                                    10, 10, 10, 10, 10, 15, 15, 5,  5,  5,  5,  5};
  const auto& prices = season == Season::summer ? summer : winter;
  return {{prices.begin(), prices.end()}, level == DemandLevel::low ? 20.0 : 30.0};
}

/// 2 kWh pack run in a 1.8 kWh window, 0.6 kW both ways.
[[nodiscard]] inline BatterySpec builtin_battery() { return {1.8, 0.6, 0.6, 2.0}; }

// ---------------------------------------------------------------------------
// Synthetic profiles
//
// Stand-ins for measured residential load and PV output. They reproduce the
// qualitative shape only: a morning and a larger evening load peak, and a PV
// bell between sunrise and sunset.

struct Profile {
  std::vector<double> load;
  std::vector<double> generation;
};

/// Daily energy (kWh) used when no scale is given.
[[nodiscard]] inline double default_daily_load(Season season) {
  return season == Season::summer ? 18.0 : 28.0;
}

[[nodiscard]] inline Profile synth_profile(Season season, Weather weather, DayType day, double daily_load_kwh,
                                           std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> load_noise(0.9, 1.1);
  std::uniform_real_distribution<double> pv_noise(0.95, 1.05);
  const auto bump = [](double t, double centre, double width) {
    const double z = (t - centre) / width;
    return std::exp(-0.5 * z * z);
  };

  const bool weekday = day == DayType::weekday;
  const bool summer = season == Season::summer;
  const double morning_at = weekday ? 7.5 : 9.5;
  const double morning_width = weekday ? 1.3 : 2.0;
  const double morning_amp = summer ? 0.7 : 1.0;
  const double evening_at = summer ? 19.5 : 18.5;
  const double evening_amp = summer ? 1.4 : 1.8;
  const double base = summer ? 0.45 : 0.6;

  // 3 kW DC array derated to AC; Helena-like day lengths
  const double pv_peak = 3.0 * 0.77 * (summer ? 0.85 : 0.55) * (weather == Weather::sunny ? 1.0 : 0.3);
  const double sunrise = summer ? 5.5 : 8.0;
  const double sunset = summer ? 21.0 : 17.0;

  Profile p;
  p.load.resize(kHoursPerDay);
  p.generation.resize(kHoursPerDay);
  double load_sum = 0.0;
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    const double t = static_cast<double>(h) + 0.5;
    const double shape = base + morning_amp * bump(t, morning_at, morning_width) +
                         evening_amp * bump(t, evening_at, 2.0);
    p.load[h] = shape * load_noise(rng);
    load_sum += p.load[h];

    const double noise = pv_noise(rng);  // drawn every hour so weather does not shift the stream
    if (t > sunrise && t < sunset) {
      const double phase = std::sin(std::numbers::pi * (t - sunrise) / (sunset - sunrise));
      p.generation[h] = pv_peak * std::pow(phase, 1.5) * noise;
    }
  }
  for (auto& l : p.load) l *= daily_load_kwh / load_sum;
  return p;
}

/// A complete synthetic day on the built-in tariff and battery, x_0 = 0.
[[nodiscard]] inline Scenario synthetic_scenario(Season season, Weather weather, DayType day, DemandLevel level,
                                                 std::uint64_t seed, std::optional<double> daily_load = {}) {
  auto profile = synth_profile(season, weather, day, daily_load.value_or(default_daily_load(season)), seed);
  Scenario s;
  s.meta.name = "synthetic-" + std::string(to_string(season)) + "-" + std::string(to_string(weather)) + "-" +
                std::string(to_string(day)) + "-" + std::string(to_string(level)) + "-" + std::to_string(seed);
  s.meta.season = season;
  s.meta.weather = weather;
  s.meta.day_type = day;
  s.horizon = kHoursPerDay;
  s.load = std::move(profile.load);
  s.generation = std::move(profile.generation);
  s.tariff = builtin_tariff(season, level);
  s.battery = builtin_battery();
  return s;
}

// ---------------------------------------------------------------------------
// Scenario documents

namespace detail {

using json = nlohmann::ordered_json;

inline const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(key, "missing required field");
  return *it;
}

inline double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  return v.get<double>();
}

inline bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ParseError(field, "expected true or false");
  return v.get<bool>();
}

inline std::vector<double> as_series(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Enum>
Enum as_enum(const json& v, const std::string& field) {
  if (v.is_string()) {
    if (auto e = enum_from_string<Enum>(v.get<std::string>())) return *e;
  }
  throw ParseError(field, "unrecognized value " + v.dump());
}

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ParseError(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
    }
  }
}

inline Tariff parse_tariff(const json& v) {
  if (!v.is_object()) throw ParseError("tariff", "expected an object");
  if (v.contains("builtin")) {
    reject_unknown(v, {"builtin", "demand_level"}, "tariff");
    return builtin_tariff(as_enum<Season>(v["builtin"], "tariff.builtin"),
                          as_enum<DemandLevel>(require(v, "demand_level"), "tariff.demand_level"));
  }
  reject_unknown(v, {"energy_price", "demand_rate"}, "tariff");
  const auto& prices = v.find("energy_price");
  if (prices == v.end()) throw ParseError("tariff.energy_price", "missing required field");
  const auto& rate = v.find("demand_rate");
  if (rate == v.end()) throw ParseError("tariff.demand_rate", "missing required field");
  return {as_series(*prices, "tariff.energy_price"), as_number(*rate, "tariff.demand_rate")};
}

inline BatterySpec parse_battery(const json& v) {
  if (v.is_string() && v.get<std::string>() == "builtin") return builtin_battery();
  if (!v.is_object()) throw ParseError("battery", "expected an object or \"builtin\"");
  reject_unknown(v, {"capacity", "charge_limit", "discharge_limit", "nominal_capacity"}, "battery");
  BatterySpec b;
  const auto field = [&](const char* key) {
    auto it = v.find(key);
    if (it == v.end()) throw ParseError(std::string("battery.") + key, "missing required field");
    return as_number(*it, std::string("battery.") + key);
  };
  b.capacity = field("capacity");
  b.charge_limit = field("charge_limit");
  b.discharge_limit = field("discharge_limit");
  if (auto it = v.find("nominal_capacity"); it != v.end()) {
    b.nominal_capacity = as_number(*it, "battery.nominal_capacity");
  }
  return b;
}

}  // namespace detail

/// Parses and validates a scenario document. Throws ParseError for malformed
/// or unknown content and ValidationError for out-of-range values.
[[nodiscard]] inline Scenario parse_scenario(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "document must be a JSON object");
  detail::reject_unknown(doc,
                         {"format_version", "name", "season", "weather", "day_type", "horizon", "load",
                          "generation", "tariff", "battery", "initial_charge", "cyclic",
                          "literal_demand_formula"},
                         "");

  const auto& version = detail::require(doc, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kScenarioFormatVersion) {
    throw ParseError("format_version", "unsupported version " + version.dump());
  }

  Scenario s;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name", "expected a string");
    s.meta.name = it->get<std::string>();
  }
  if (auto it = doc.find("season"); it != doc.end()) s.meta.season = detail::as_enum<Season>(*it, "season");
  if (auto it = doc.find("weather"); it != doc.end()) s.meta.weather = detail::as_enum<Weather>(*it, "weather");
  if (auto it = doc.find("day_type"); it != doc.end()) s.meta.day_type = detail::as_enum<DayType>(*it, "day_type");

  s.load = detail::as_series(detail::require(doc, "load"), "load");
  s.generation = detail::as_series(detail::require(doc, "generation"), "generation");
  s.horizon = s.load.size();
  if (auto it = doc.find("horizon"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ParseError("horizon", "expected a non-negative integer");
    s.horizon = it->get<std::size_t>();
  }
  s.tariff = detail::parse_tariff(detail::require(doc, "tariff"));
  s.battery = detail::parse_battery(detail::require(doc, "battery"));
  if (auto it = doc.find("initial_charge"); it != doc.end()) s.initial_charge = detail::as_number(*it, "initial_charge");
  if (auto it = doc.find("cyclic"); it != doc.end()) s.cyclic = detail::as_bool(*it, "cyclic");
  if (auto it = doc.find("literal_demand_formula"); it != doc.end()) {
    s.literal_demand_formula = detail::as_bool(*it, "literal_demand_formula");
  }
  return validated(std::move(s));
}

[[nodiscard]] inline std::string write_scenario(const Scenario& s) {
  using detail::json;
  json doc;
  doc["format_version"] = kScenarioFormatVersion;
  doc["name"] = s.meta.name;
  if (s.meta.season) doc["season"] = to_string(*s.meta.season);
  if (s.meta.weather) doc["weather"] = to_string(*s.meta.weather);
  if (s.meta.day_type) doc["day_type"] = to_string(*s.meta.day_type);
  doc["horizon"] = s.horizon;
  doc["load"] = s.load;
  doc["generation"] = s.generation;
  doc["tariff"] = {{"energy_price", s.tariff.energy_price}, {"demand_rate", s.tariff.demand_rate}};
  json battery = {{"capacity", s.battery.capacity},
                  {"charge_limit", s.battery.charge_limit},
                  {"discharge_limit", s.battery.discharge_limit}};
  if (s.battery.nominal_capacity) battery["nominal_capacity"] = *s.battery.nominal_capacity;
  doc["battery"] = std::move(battery);
  doc["initial_charge"] = s.initial_charge;
  doc["cyclic"] = s.cyclic;
  doc["literal_demand_formula"] = s.literal_demand_formula;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Profile CSV

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline double parse_double(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) throw ParseError(where, "not a number: '" + std::string(cell) + "'");
  return v;
}

}  // namespace detail

/// Reads `hour,load_kwh,gen_kwh` rows. Hours must run 0, 1, 2, ... in order.
[[nodiscard]] inline Profile parse_profile_csv(std::string_view text) {
  Profile p;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto cells = detail::split_csv_line(line);
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "hour" || cells[1] != "load_kwh" || cells[2] != "gen_kwh") {
        throw ParseError(where, "expected header 'hour,load_kwh,gen_kwh'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) throw ParseError(where, "expected 3 columns");
    const double hour = detail::parse_double(cells[0], where + " hour");
    if (hour != static_cast<double>(p.load.size())) {
      throw ParseError(where, "expected hour " + std::to_string(p.load.size()));
    }
    p.load.push_back(detail::parse_double(cells[1], where + " load_kwh"));
    p.generation.push_back(detail::parse_double(cells[2], where + " gen_kwh"));
  }
  if (!header_seen) throw ParseError("", "empty profile");
  if (p.load.empty()) throw ParseError("", "profile has no data rows");
  return p;
}

}  // namespace ess
