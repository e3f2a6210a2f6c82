#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.
//
//   ess_schedule run   --scenario PATH [--algo rcga,npb,...] [--seed S] [--seeds K] ...
//   ess_schedule run   --profile CSV --season summer --rate low ...
//   ess_schedule synth --season winter --weather cloudy --day weekday --rate high --out PATH

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ess/ess.hpp"

namespace ess::cli {

enum class Algo { noess, npb, rcga, dp };

inline std::string_view name_of(Algo a) {
  switch (a) {
    case Algo::noess: return "noess";
    case Algo::npb: return "npb";
    case Algo::rcga: return "rcga";
    case Algo::dp: return "dp";
  }
  return "?";
}

struct RunOptions {
  std::string scenario_path;
  std::string profile_path;
  std::string season = "summer";
  std::string rate = "low";
  std::vector<std::string> algos{"all"};
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::size_t population = 100;
  std::size_t generations = 2000;
  double alpha = 0.5;
  std::optional<double> mutation_rate;
  double grid_step = 0.05;
  std::string snap = "floor";
  bool literal_demand = false;
  bool parallel_fitness = false;
  std::string out_path;
  std::string series_path;
};

struct SynthOptions {
  std::string season = "summer";
  std::string weather = "sunny";
  std::string day = "weekday";
  std::string rate = "low";
  std::uint64_t seed = 1;
  std::optional<double> daily_load;
  double initial_charge = 0.0;
  std::string out_path;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw CliError("cannot write '" + path + "'");
}

template <class Enum>
Enum parse_enum(const std::string& value, const char* flag) {
  if (auto e = enum_from_string<Enum>(value)) return *e;
  throw CliError(std::string("invalid value for ") + flag + ": '" + value + "'");
}

inline std::vector<Algo> parse_algos(const std::vector<std::string>& names) {
  std::vector<Algo> out;
  const auto add = [&out](Algo a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (const auto& n : names) {
    if (n == "all") {
      for (auto a : {Algo::noess, Algo::npb, Algo::rcga, Algo::dp}) add(a);
    } else if (n == "noess") {
      add(Algo::noess);
    } else if (n == "npb") {
      add(Algo::npb);
    } else if (n == "rcga") {
      add(Algo::rcga);
    } else if (n == "dp") {
      add(Algo::dp);
    } else {
      throw CliError("unknown algorithm '" + n + "'");
    }
  }
  return out;
}

inline Scenario load_scenario(const RunOptions& o) {
  if (!o.scenario_path.empty() && !o.profile_path.empty()) {
    throw CliError("--scenario and --profile are mutually exclusive");
  }
  Scenario s;
  if (!o.scenario_path.empty()) {
    s = parse_scenario(read_file(o.scenario_path));
  } else if (!o.profile_path.empty()) {
    auto profile = parse_profile_csv(read_file(o.profile_path));
    s.meta.name = std::filesystem::path(o.profile_path).stem().string();
    s.meta.season = parse_enum<Season>(o.season, "--season");
    s.horizon = profile.load.size();
    s.load = std::move(profile.load);
    s.generation = std::move(profile.generation);
    s.tariff = builtin_tariff(*s.meta.season, parse_enum<DemandLevel>(o.rate, "--rate"));
    s.battery = builtin_battery();
    s = validated(std::move(s));
  } else {
    throw CliError("one of --scenario or --profile is required");
  }
  if (o.literal_demand) s.literal_demand_formula = true;
  return s;
}

inline std::string series_path_for(const std::string& base, Algo a, bool several) {
  if (!several) return base;
  std::filesystem::path p(base);
  const auto ext = p.extension().string();
  p.replace_extension();
  return p.string() + "." + std::string(name_of(a)) + ext;
}

struct AlgoOutcome {
  Algo algo;
  CostBreakdown cost;
  Schedule schedule;
  std::vector<double> totals;  ///< per seed, rcga only
  std::vector<CostBreakdown> per_seed;
};

inline int run_command(const RunOptions& o, std::ostream& out) {
  const auto algos = parse_algos(o.algos);
  const Scenario s = load_scenario(o);
  if (o.seeds == 0) throw CliError("--seeds must be at least 1");

  RcgaConfig rc;
  rc.population = o.population;
  rc.generations = o.generations;
  rc.alpha = o.alpha;
  rc.mutation_rate = o.mutation_rate;
  rc.parallel_fitness = o.parallel_fitness;
  DpConfig dc;
  dc.grid_step = o.grid_step;
  if (o.snap == "floor") {
    dc.snap_mode = SnapMode::floor;
  } else if (o.snap == "nearest") {
    dc.snap_mode = SnapMode::nearest;
  } else {
    throw CliError("invalid value for --snap: '" + o.snap + "'");
  }

  const CostBreakdown reference = no_ess_cost(s);
  std::vector<AlgoOutcome> outcomes;
  for (Algo a : algos) {
    AlgoOutcome r{a, {}, {}, {}, {}};
    switch (a) {
      case Algo::noess:
        r.cost = reference;
        r.schedule.residual.assign(s.horizon, s.initial_charge);
        break;
      case Algo::npb:
        r.schedule = npb_schedule(s);
        r.cost = evaluate(s, r.schedule);
        break;
      case Algo::dp: {
        auto d = dp_solve(s, dc);
        if (d.snap_distance > 0.0) {
          out << fmt::format("note: dp snapped initial charge by {:.6g} kWh\n", d.snap_distance);
        }
        r.cost = std::move(d.cost);
        r.schedule = std::move(d.schedule);
        break;
      }
      case Algo::rcga: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < o.seeds; ++k) {
          rc.seed = o.seed + k;
          auto res = run_rcga(s, rc);
          auto c = evaluate(s, res.best.genes);
          r.totals.push_back(c.total);
          if (c.total < best) {
            best = c.total;
            r.schedule = res.best.genes;
          }
          r.per_seed.push_back(std::move(c));
        }
        r.cost = evaluate(s, r.schedule);
        break;
      }
    }
    outcomes.push_back(std::move(r));
  }

  // report rows: an rcga repeat study reports its mean and standard deviation
  std::vector<ReportRow> rows;
  for (const auto& r : outcomes) {
    if (r.algo == Algo::rcga && o.seeds > 1) {
      const auto column = [&](auto member) {
        std::vector<double> v;
        for (const auto& c : r.per_seed) v.push_back(member(c));
        return sample_stats(v);
      };
      const auto energy = column([](const CostBreakdown& c) { return c.energy_charge; });
      const auto demand = column([](const CostBreakdown& c) { return c.demand_charge; });
      const auto total = column([](const CostBreakdown& c) { return c.total; });
      const auto peak = column([](const CostBreakdown& c) { return c.peak_net; });
      ReportRow mean{"rcga_mean", energy.mean, demand.mean, total.mean, peak.mean};
      ReportRow sd{"rcga_std", energy.stddev, demand.stddev, total.stddev, peak.stddev};
      if (reference.total > 0.0) {
        std::vector<double> savings;
        for (double t : r.totals) savings.push_back(saving_percent(reference.total, t));
        const auto st = sample_stats(savings);
        mean.saving_pct = st.mean;
        sd.saving_pct = st.stddev;
      }
      rows.push_back(mean);
      rows.push_back(sd);
    } else {
      rows.push_back(make_row(std::string(name_of(r.algo)), r.cost, reference.total));
    }
  }

  out << fmt::format("scenario: {} (T={}, demand rate {} c/kW{})\n", s.meta.name.empty() ? "-" : s.meta.name,
                     s.horizon, format_number(s.tariff.demand_rate),
                     s.literal_demand_formula ? ", literal demand term" : "");
  out << fmt::format("{:<6} {:>10} {:>10} {:>16} {:>9} {:>12} {:>7}\n", "algo", "energy", "demand", "total",
                     "peak_kWh", "saving_%", "saving");
  for (const auto& r : outcomes) {
    std::string total = fmt::format("{:.2f}", r.cost.total);
    double energy = r.cost.energy_charge;
    double demand = r.cost.demand_charge;
    double peak = r.cost.peak_net;
    double total_value = r.cost.total;
    if (r.algo == Algo::rcga && o.seeds > 1) {
      const auto st = sample_stats(r.totals);
      total = fmt::format("{:.2f} ({:.2f})", st.mean, st.stddev);
      total_value = st.mean;
      const auto& mean_row = *std::find_if(rows.begin(), rows.end(), [](auto& x) { return x.algo == "rcga_mean"; });
      energy = mean_row.energy_charge;
      demand = mean_row.demand_charge;
      peak = mean_row.peak_net;
    }
    std::string saving_full = "-";
    std::string saving_int = "-";
    if (reference.total > 0.0) {
      const double pct = saving_percent(reference.total, total_value);
      saving_full = format_number(pct);
      saving_int = fmt::format("{}", static_cast<long long>(std::llround(pct)));
    }
    out << fmt::format("{:<6} {:>10.2f} {:>10.2f} {:>16} {:>9.4f} {:>12.12} {:>7}\n", name_of(r.algo), energy,
                       demand, total, peak, saving_full, saving_int);
  }

  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_report_csv(csv, rows);
    write_file(o.out_path, csv.str());
  }
  if (!o.series_path.empty()) {
    for (const auto& r : outcomes) {
      std::ostringstream csv;
      write_series_csv(csv, s, r.schedule);
      write_file(series_path_for(o.series_path, r.algo, outcomes.size() > 1), csv.str());
    }
  }
  return 0;
}

inline int synth_command(const SynthOptions& o, std::ostream& out) {
  auto s = synthetic_scenario(parse_enum<Season>(o.season, "--season"), parse_enum<Weather>(o.weather, "--weather"),
                              parse_enum<DayType>(o.day, "--day"), parse_enum<DemandLevel>(o.rate, "--rate"), o.seed,
                              o.daily_load);
  s.initial_charge = o.initial_charge;
  s = validated(std::move(s));
  const auto doc = write_scenario(s);
  if (o.out_path.empty()) {
    out << doc;
  } else {
    write_file(o.out_path, doc);
  }
  return 0;
}

/// Parses `argv` and runs the chosen subcommand. Returns the process exit code.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  CLI::App app{"Battery charge scheduling under time-of-use pricing with a demand charge"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Schedule a scenario and report costs");
  run_cmd->add_option("--scenario", run.scenario_path, "Scenario document (JSON)");
  run_cmd->add_option("--profile", run.profile_path, "Profile CSV (hour,load_kwh,gen_kwh) on the built-in tariff");
  run_cmd->add_option("--season", run.season, "Tariff season for --profile")->check(CLI::IsMember({"summer", "winter"}));
  run_cmd->add_option("--rate", run.rate, "Demand-charge level for --profile")->check(CLI::IsMember({"low", "high"}));
  run_cmd->add_option("--algo", run.algos, "rcga, npb, noess, dp or all (comma separated)")->delimiter(',');
  run_cmd->add_option("--seed", run.seed, "Base RCGA seed");
  run_cmd->add_option("--seeds", run.seeds, "Number of RCGA runs (seeds seed..seed+K-1)");
  run_cmd->add_option("--pop", run.population, "RCGA population size");
  run_cmd->add_option("--gens", run.generations, "RCGA generations");
  run_cmd->add_option("--alpha", run.alpha, "BLX-alpha parameter");
  run_cmd->add_option("--pm", run.mutation_rate, "Per-gene mutation rate (default 0.1/T)");
  run_cmd->add_option("--grid-step", run.grid_step, "DP grid step, kWh");
  run_cmd->add_option("--snap", run.snap, "DP snapping of an off-grid initial charge")
      ->check(CLI::IsMember({"floor", "nearest"}));
  run_cmd->add_flag("--literal-demand-formula", run.literal_demand, "Do not floor the demand charge at zero");
  run_cmd->add_flag("--parallel-fitness", run.parallel_fitness, "Evaluate RCGA offspring on worker threads");
  run_cmd->add_option("--out", run.out_path, "Write the CSV report here");
  run_cmd->add_option("--emit-series", run.series_path, "Write hourly series CSV here");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic scenario document");
  synth_cmd->add_option("--season", synth.season)->check(CLI::IsMember({"summer", "winter"}));
  synth_cmd->add_option("--weather", synth.weather)->check(CLI::IsMember({"sunny", "cloudy"}));
  synth_cmd->add_option("--day", synth.day)->check(CLI::IsMember({"weekday", "weekend"}));
  synth_cmd->add_option("--rate", synth.rate)->check(CLI::IsMember({"low", "high"}));
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--daily-load", synth.daily_load, "Daily load total, kWh");
  synth_cmd->add_option("--initial-charge", synth.initial_charge, "x_0, kWh");
  synth_cmd->add_option("--out", synth.out_path, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run_cmd) return run_command(run, out);
    return synth_command(synth, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ess::cli
