#pragma once

// CSV reports: per-algorithm cost rows and hourly plot series.
//
// Numbers are written in shortest round-trip form, so a file read back gives
// the exact doubles that were written and identical runs give identical bytes.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ess/cost.hpp"
#include "ess/domain.hpp"
#include "ess/scenario_io.hpp"

namespace ess {

[[nodiscard]] inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return {buf, end};
}

struct ReportRow {
  std::string algo;
  double energy_charge = 0.0;
  double demand_charge = 0.0;
  double total = 0.0;
  double peak_net = 0.0;
  /// Against the no-ESS bill; NaN when that bill is zero.
  double saving_pct = std::numeric_limits<double>::quiet_NaN();
};

[[nodiscard]] inline ReportRow make_row(std::string algo, const CostBreakdown& c, double reference_total) {
  ReportRow r{std::move(algo), c.energy_charge, c.demand_charge, c.total, c.peak_net};
  if (reference_total > 0.0) r.saving_pct = saving_percent(reference_total, c.total);
  return r;
}

inline constexpr std::string_view kReportHeader = "algo,energy_charge,demand_charge,total,peak_net,saving_pct";
inline constexpr std::string_view kSeriesHeader = "hour,load,gen,price,residual,net_grid";

inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.algo << ',' << format_number(r.energy_charge) << ',' << format_number(r.demand_charge) << ','
        << format_number(r.total) << ',' << format_number(r.peak_net) << ',' << format_number(r.saving_pct)
        << '\n';
  }
}

/// Hourly series for plotting a schedule: one row per interval.
inline void write_series_csv(std::ostream& out, const Scenario& s, const Schedule& x) {
  const auto net = net_series(s, x);
  out << kSeriesHeader << '\n';
  for (std::size_t i = 0; i < s.horizon; ++i) {
    out << i << ',' << format_number(s.load[i]) << ',' << format_number(s.generation[i]) << ','
        << format_number(s.tariff.energy_price[i]) << ',' << format_number(x[i]) << ','
        << format_number(net[i]) << '\n';
  }
}

inline void emit_series(const Scenario& s, const Schedule& x, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_series_csv(out, s, x);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

struct SeriesRow {
  std::size_t hour = 0;
  double load = 0.0;
  double gen = 0.0;
  double price = 0.0;
  double residual = 0.0;
  double net_grid = 0.0;
};

[[nodiscard]] inline std::vector<SeriesRow> parse_series_csv(std::string_view text) {
  std::vector<SeriesRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kSeriesHeader) {
    throw ParseError("", "expected series header '" + std::string(kSeriesHeader) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 6) throw ParseError(where, "expected 6 columns");
    SeriesRow r;
    r.hour = static_cast<std::size_t>(detail::parse_double(cells[0], where));
    r.load = detail::parse_double(cells[1], where);
    r.gen = detail::parse_double(cells[2], where);
    r.price = detail::parse_double(cells[3], where);
    r.residual = detail::parse_double(cells[4], where);
    r.net_grid = detail::parse_double(cells[5], where);
    rows.push_back(r);
  }
  return rows;
}

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample (n - 1) standard deviation; 0 for n < 2
};

[[nodiscard]] inline SampleStats sample_stats(const std::vector<double>& v) {
  SampleStats st;
  if (v.empty()) return st;
  for (double x : v) st.mean += x;
  st.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return st;
  double ss = 0.0;
  for (double x : v) ss += (x - st.mean) * (x - st.mean);
  st.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return st;
}

}  // namespace ess
