// Command-line front door: simulate | sweep | portfolio | profit | validate.
// Every run is driven by a JSON config; paths inside it resolve against the
// config file's directory, and all artifacts land under its out_dir.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gridmkt/economics.hpp"
#include "gridmkt/scenario.hpp"

namespace fs = std::filesystem;
using namespace gridmkt;

namespace {

struct RunConfig {
  fs::path dir;  // where the config file lives; anchors every relative path

  std::string case_path;
  std::string format = "native";
  int cost_segments = 4;
  std::string profiles;
  std::string scenario;
  std::string sweep;
  int day_start = 0;
  int day_end = -1;  // -1 runs the case's full horizon
  std::string out_dir;
  std::uint64_t seed = 0;
  MarketOptions market;
  AnalyticsOptions analytics;

  std::string economics;
  std::vector<std::pair<std::string, std::string>> programs;  // name -> path
  std::string price_record;
  std::string price_sidecar;
  double budget_mw = 0.0;
  bool have_budget = false;
  std::vector<double> thresholds;
  int draws = 1;
  NoiseSpec noise;
  std::string noise_kind = "none";
};

std::string str_at(const json& v, const std::string& where) {
  if (!v.is_string()) {
    throw Error(ErrorKind::syntax, "expected a string", where);
  }
  return v.get<std::string>();
}

bool bool_at(const json& v, const std::string& where) {
  if (!v.is_boolean()) {
    throw Error(ErrorKind::syntax, "expected a boolean", where);
  }
  return v.get<bool>();
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  fs::path p(path);
  cfg.dir = p.has_parent_path() ? p.parent_path() : fs::path(".");

  std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::syntax, e.what(), path, line, col);
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::syntax, "config must be a JSON object", path);
  }
  detail::reject_unknown_keys(
      doc,
      {"case", "format", "cost_segments", "profiles", "scenario", "sweep", "days",
       "out_dir", "seed", "solver", "analytics", "economics", "programs",
       "price_record", "price_sidecar", "budget_mw", "thresholds", "draws", "noise"},
      "config");

  if (doc.contains("case")) cfg.case_path = str_at(doc["case"], "config.case");
  if (doc.contains("format")) {
    cfg.format = str_at(doc["format"], "config.format");
    if (cfg.format != "native" && cfg.format != "mcase") {
      throw Error(ErrorKind::config, "format must be 'native' or 'mcase'");
    }
  }
  if (doc.contains("cost_segments")) {
    cfg.cost_segments = detail::int_at(doc["cost_segments"], "config.cost_segments");
  }
  if (doc.contains("profiles")) cfg.profiles = str_at(doc["profiles"], "config.profiles");
  if (doc.contains("scenario")) cfg.scenario = str_at(doc["scenario"], "config.scenario");
  if (doc.contains("sweep")) cfg.sweep = str_at(doc["sweep"], "config.sweep");
  if (doc.contains("days")) {
    const json& days = doc["days"];
    if (!days.is_array() || days.size() != 2) {
      throw Error(ErrorKind::syntax, "expected [start, end]", "config.days");
    }
    cfg.day_start = detail::int_at(days[0], "config.days");
    cfg.day_end = detail::int_at(days[1], "config.days");
    if (cfg.day_start < 0 || cfg.day_end <= cfg.day_start) {
      throw Error(ErrorKind::config, "day range is empty");
    }
  }
  if (doc.contains("out_dir")) cfg.out_dir = str_at(doc["out_dir"], "config.out_dir");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw Error(ErrorKind::syntax, "expected an unsigned integer", "config.seed");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    detail::reject_unknown_keys(s,
                                {"gap", "node_cap", "max_iterations", "flow_tol",
                                 "lazy_rounds", "reference_bus"},
                                "config.solver");
    if (s.contains("gap")) cfg.market.mbp_gap = detail::number_at(s["gap"], "config.solver.gap");
    if (s.contains("node_cap")) {
      cfg.market.node_cap = detail::int_at(s["node_cap"], "config.solver.node_cap");
    }
    if (s.contains("max_iterations")) {
      cfg.market.lp.max_iterations =
          detail::int_at(s["max_iterations"], "config.solver.max_iterations");
    }
    if (s.contains("flow_tol")) {
      cfg.market.flow_tol = detail::number_at(s["flow_tol"], "config.solver.flow_tol");
    }
    if (s.contains("lazy_rounds")) {
      cfg.market.lazy_rounds = detail::int_at(s["lazy_rounds"], "config.solver.lazy_rounds");
    }
    if (s.contains("reference_bus")) {
      cfg.market.reference_bus =
          detail::int_at(s["reference_bus"], "config.solver.reference_bus");
    }
  }

  if (doc.contains("analytics")) {
    const json& a = doc["analytics"];
    detail::reject_unknown_keys(a, {"window", "load_weighted", "stddev_bus_samples"},
                                "config.analytics");
    if (a.contains("window")) {
      const json& w = a["window"];
      if (!w.is_array() || w.size() != 2) {
        throw Error(ErrorKind::syntax, "expected [start, end]", "config.analytics.window");
      }
      cfg.analytics.window_start = detail::int_at(w[0], "config.analytics.window");
      cfg.analytics.window_end = detail::int_at(w[1], "config.analytics.window");
    }
    if (a.contains("load_weighted")) {
      cfg.analytics.load_weighted = bool_at(a["load_weighted"], "config.analytics.load_weighted");
    }
    if (a.contains("stddev_bus_samples")) {
      cfg.analytics.stddev_bus_samples =
          bool_at(a["stddev_bus_samples"], "config.analytics.stddev_bus_samples");
    }
  }

  if (doc.contains("economics")) cfg.economics = str_at(doc["economics"], "config.economics");
  if (doc.contains("programs")) {
    const json& progs = doc["programs"];
    if (!progs.is_object()) {
      throw Error(ErrorKind::syntax, "expected an object of name -> path", "config.programs");
    }
    for (auto it = progs.begin(); it != progs.end(); ++it) {
      cfg.programs.push_back({it.key(), str_at(*it, "config.programs." + it.key())});
    }
  }
  if (doc.contains("price_record")) {
    cfg.price_record = str_at(doc["price_record"], "config.price_record");
  }
  if (doc.contains("price_sidecar")) {
    cfg.price_sidecar = str_at(doc["price_sidecar"], "config.price_sidecar");
  }
  if (doc.contains("budget_mw")) {
    cfg.budget_mw = detail::number_at(doc["budget_mw"], "config.budget_mw");
    cfg.have_budget = true;
  }
  if (doc.contains("thresholds")) {
    const json& th = doc["thresholds"];
    if (!th.is_array()) {
      throw Error(ErrorKind::syntax, "expected an array", "config.thresholds");
    }
    for (std::size_t i = 0; i < th.size(); ++i) {
      cfg.thresholds.push_back(detail::number_at(th[i], "config.thresholds"));
    }
  }
  if (doc.contains("draws")) cfg.draws = detail::int_at(doc["draws"], "config.draws");

  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    detail::reject_unknown_keys(n, {"kind", "sigma", "residuals"}, "config.noise");
    cfg.noise_kind = str_at(detail::require(n, "kind", "config.noise"), "config.noise.kind");
    if (cfg.noise_kind == "none") {
      cfg.noise = {};
    } else if (cfg.noise_kind == "gaussian") {
      cfg.noise = make_gaussian_noise(
          detail::number_at(detail::require(n, "sigma", "config.noise"), "config.noise.sigma"));
    } else if (cfg.noise_kind == "bootstrap") {
      const json& pool = detail::require(n, "residuals", "config.noise");
      if (!pool.is_array()) {
        throw Error(ErrorKind::syntax, "expected an array", "config.noise.residuals");
      }
      std::vector<double> residuals;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        residuals.push_back(detail::number_at(pool[i], "config.noise.residuals"));
      }
      cfg.noise = make_bootstrap_noise(std::move(residuals));
    } else {
      throw Error(ErrorKind::config, "noise kind must be none, gaussian, or bootstrap");
    }
  }
  return cfg;
}

// reads inputs relative to the config and remembers their content hashes for
// the run manifest
struct InputTracker {
  const RunConfig* cfg;
  json hashes = json::object();

  std::string read(const std::string& rel) {
    std::string text = read_file(cfg->dir / rel);
    hashes[rel] = hash_hex(fnv1a64(text));
    return text;
  }
};

GridCase load_case(const RunConfig& cfg, InputTracker& in) {
  if (cfg.case_path.empty()) {
    throw Error(ErrorKind::config, "this command needs a 'case' path");
  }
  std::string text = in.read(cfg.case_path);
  GridCase c = cfg.format == "mcase" ? parse_mcase(text, {cfg.cost_segments})
                                     : parse_case(text);
  if (!cfg.profiles.empty()) {
    c = with_demand_profile(std::move(c), parse_profile_csv(in.read(cfg.profiles)));
  }
  return c;
}

fs::path out_root(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) {
    throw Error(ErrorKind::config, "this command needs an 'out_dir'");
  }
  return cfg.dir / cfg.out_dir;
}

json solver_settings(const MarketOptions& m) {
  json s;
  s["gap"] = m.mbp_gap;
  s["node_cap"] = m.node_cap;
  s["max_iterations"] = m.lp.max_iterations;
  s["flow_tol"] = m.flow_tol;
  s["lazy_rounds"] = m.lazy_rounds;
  s["reference_bus"] = m.reference_bus;
  return s;
}

json analytics_settings(const AnalyticsOptions& a) {
  json s;
  s["window"] = json::array({a.window_start, a.window_end});
  s["load_weighted"] = a.load_weighted;
  s["stddev_bus_samples"] = a.stddev_bus_samples;
  return s;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const InputTracker& in, json settings, json extra) {
  json doc;
  doc["command"] = command;
  doc["seed"] = cfg.seed;
  doc["inputs"] = in.hashes;
  doc["settings"] = std::move(settings);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = *it;
  atomic_write_file(out_root(cfg) / "run_manifest.json", doc.dump(2) + "\n");
}

// per-county mean over the feasible intervals of a stats series
std::map<std::string, double> county_means(const LmpStats& stats) {
  std::map<std::string, double> table;
  for (const auto& [name, series] : stats.county_lmp) {
    double sum = 0.0;
    int n = 0;
    for (double v : series) {
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    if (n > 0) table[name] = sum / n;
  }
  return table;
}

int feasible_days_of(const PriceRecord& rec) {
  int n = 0;
  for (DayStatus s : rec.day_status) {
    if (s == DayStatus::optimal) ++n;
  }
  return n;
}

int cmd_validate(const RunConfig& cfg) {
  InputTracker in{&cfg};
  GridCase c = load_case(cfg, in);
  NetworkModel net = build_network(c, cfg.market.reference_bus);
  std::printf("case %s: ok\n", cfg.case_path.c_str());
  std::printf("hash %s\n", case_hash(c).c_str());
  std::printf("buses %zu  branches %zu (%zu monitored)  generators %zu  renewables %zu\n",
              c.buses.size(), c.branches.size(), net.branch_rows.size(),
              c.generators.size(), c.renewables.size());
  std::printf("days %d  reference bus %d\n", static_cast<int>(c.days()), net.reference_bus);
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  InputTracker in{&cfg};
  GridCase c = load_case(cfg, in);
  fs::path out = out_root(cfg);

  std::string label;
  if (!cfg.scenario.empty()) {
    MiningScenario s = parse_scenario(in.read(cfg.scenario));
    label = s.label;
    c = inject(c, s);
  }
  int day_end = cfg.day_end < 0 ? c.days() : cfg.day_end;

  HorizonResult run = run_horizon(c, cfg.day_start, day_end, cfg.market, label, cfg.seed);
  const PriceRecord& rec = run.record;

  atomic_write_file(out / "prices.csv", serialize_price_csv(rec));
  atomic_write_file(out / "prices_meta.json", serialize_price_sidecar(rec));

  int feasible = feasible_days_of(rec);
  if (feasible > 0) {
    LmpStats stats = compute_stats(rec, c, cfg.analytics);
    atomic_write_file(out / "stats.csv", serialize_stats_csv(stats, rec.first_day));
    atomic_write_file(out / "hourly.csv", serialize_hourly_csv(stats));
    auto counties = county_means(stats);
    if (!counties.empty()) {
      atomic_write_file(out / "county.csv", serialize_county_csv(counties));
    }
  }

  json settings;
  settings["format"] = cfg.format;
  settings["days"] = json::array({cfg.day_start, day_end});
  settings["scenario_label"] = label;
  settings["solver"] = solver_settings(cfg.market);
  settings["analytics"] = analytics_settings(cfg.analytics);

  json extra;
  extra["case_hash"] = rec.case_hash;
  json statuses = json::array();
  for (DayStatus s : rec.day_status) statuses.push_back(to_string(s));
  extra["day_status"] = std::move(statuses);
  write_manifest(cfg, "simulate", in, std::move(settings), std::move(extra));

  std::printf("simulate: %d of %d days feasible, artifacts in %s\n", feasible,
              rec.num_days(), out.string().c_str());
  return feasible > 0 ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, int jobs) {
  InputTracker in{&cfg};
  GridCase c = load_case(cfg, in);
  fs::path out = out_root(cfg);
  if (cfg.sweep.empty()) {
    throw Error(ErrorKind::config, "sweep needs a 'sweep' spec path");
  }
  SweepSpec spec = parse_sweep_spec(in.read(cfg.sweep));

  SweepReport report = capacity_sweep(c, spec, cfg.market, cfg.analytics, jobs, cfg.seed);

  for (const auto& cell : report.cells) {
    fs::path dir = out / (cell.set_name + "_" + fmt_double(cell.capacity_mw));
    atomic_write_file(dir / "prices.csv", serialize_price_csv(cell.record));
    atomic_write_file(dir / "prices_meta.json", serialize_price_sidecar(cell.record));
  }

  // summary rows carry the cell stats plus deltas against the same set's
  // capacity-0 cell, when both ends have statistics
  const std::size_t caps = spec.capacities_mw.size();
  std::string csv =
      "set,capacity_mw,feasible_days,infeasible_days,failed_days,"
      "overall_mean,window_mean,std_dev,"
      "delta_overall_mean,delta_window_mean,delta_std_dev,non_uniform\n";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const SweepCell& cell = report.cells[i];
    const SweepCell* base = nullptr;
    for (std::size_t j = (i / caps) * caps; j < (i / caps + 1) * caps; ++j) {
      if (report.cells[j].capacity_mw == 0.0) {
        base = &report.cells[j];
        break;
      }
    }
    csv += cell.set_name;
    csv += "," + fmt_double(cell.capacity_mw);
    csv += "," + std::to_string(cell.feasible_days);
    csv += "," + std::to_string(cell.infeasible_days);
    csv += "," + std::to_string(cell.failed_days);
    if (cell.has_stats) {
      csv += "," + fmt_double(cell.stats.overall_mean);
      csv += "," + fmt_double(cell.stats.window_mean(cfg.analytics.window_start,
                                                     cfg.analytics.window_end));
      csv += "," + fmt_double(cell.stats.std_dev);
    } else {
      csv += ",,,";
    }
    if (cell.has_stats && base != nullptr && base->has_stats) {
      ComparisonRow row = compare(base->stats, cell.stats, cfg.analytics.window_start,
                                  cfg.analytics.window_end);
      csv += "," + fmt_double(row.delta_overall_mean);
      csv += "," + fmt_double(row.delta_window_mean);
      csv += "," + fmt_double(row.delta_std_dev);
      csv += row.non_uniform ? ",true" : ",false";
    } else {
      csv += ",,,,";
    }
    csv += "\n";
  }
  atomic_write_file(out / "sweep_summary.csv", csv);

  json settings;
  settings["format"] = cfg.format;
  settings["days"] = json::array({report.day_start, report.day_end});
  settings["solver"] = solver_settings(cfg.market);
  settings["analytics"] = analytics_settings(cfg.analytics);

  json cells = json::array();
  int any_feasible = 0;
  for (const auto& cell : report.cells) {
    json row;
    row["set"] = cell.set_name;
    row["capacity_mw"] = cell.capacity_mw;
    row["feasible_days"] = cell.feasible_days;
    row["infeasible_days"] = cell.infeasible_days;
    row["failed_days"] = cell.failed_days;
    cells.push_back(std::move(row));
    any_feasible += cell.feasible_days;
  }
  json extra;
  extra["case_hash"] = case_hash(c);
  extra["cells"] = std::move(cells);
  write_manifest(cfg, "sweep", in, std::move(settings), std::move(extra));

  std::printf("sweep: %zu cells, summary in %s\n", report.cells.size(),
              (out / "sweep_summary.csv").string().c_str());
  return any_feasible > 0 ? 0 : 2;
}

std::vector<DrProgram> load_programs(const RunConfig& cfg, InputTracker& in) {
  std::vector<DrProgram> programs;
  for (const auto& [name, path] : cfg.programs) {
    programs.push_back(parse_program_csv(in.read(path), name));
  }
  return programs;
}

json portfolio_json(const std::vector<DrProgram>& programs, const MiningEconomics& econ,
                    const PortfolioSolution& sol, double budget_mw) {
  json doc;
  doc["budget_mw"] = budget_mw;
  json rows = json::array();
  for (std::size_t i = 0; i < programs.size(); ++i) {
    json row;
    row["name"] = programs[i].name;
    row["score"] = program_score(programs[i], econ);
    row["capacity_mw"] = sol.capacities[i];
    rows.push_back(std::move(row));
  }
  doc["programs"] = std::move(rows);
  doc["expected_profit"] = sol.expected_profit;
  if (sol.binding >= 0) {
    doc["binding"] = programs[sol.binding].name;
  } else {
    doc["binding"] = nullptr;
  }
  return doc;
}

int cmd_portfolio(const RunConfig& cfg) {
  InputTracker in{&cfg};
  fs::path out = out_root(cfg);
  if (cfg.economics.empty()) {
    throw Error(ErrorKind::config, "portfolio needs an 'economics' CSV");
  }
  if (cfg.programs.empty()) {
    throw Error(ErrorKind::config, "portfolio needs at least one entry in 'programs'");
  }
  if (!cfg.have_budget) {
    throw Error(ErrorKind::config, "portfolio needs a 'budget_mw'");
  }
  MiningEconomics econ = parse_economics_csv(in.read(cfg.economics));
  std::vector<DrProgram> programs = load_programs(cfg, in);
  std::size_t horizon = programs.front().intervals.size();

  PortfolioSolution sol = solve_portfolio(programs, econ, cfg.budget_mw, horizon);
  atomic_write_file(out / "portfolio.json",
                    portfolio_json(programs, econ, sol, cfg.budget_mw).dump(2) + "\n");

  json settings;
  settings["budget_mw"] = cfg.budget_mw;
  settings["horizon"] = horizon;
  write_manifest(cfg, "portfolio", in, std::move(settings), json::object());

  std::printf("portfolio: profit %s, allocation in %s\n",
              fmt_double(sol.expected_profit).c_str(),
              (out / "portfolio.json").string().c_str());
  return 0;
}

int cmd_profit(const RunConfig& cfg, int jobs) {
  InputTracker in{&cfg};
  fs::path out = out_root(cfg);
  if (cfg.economics.empty()) {
    throw Error(ErrorKind::config, "profit needs an 'economics' CSV");
  }
  if (cfg.price_record.empty() || cfg.price_sidecar.empty()) {
    throw Error(ErrorKind::config, "profit needs 'price_record' and 'price_sidecar'");
  }
  if (cfg.thresholds.empty()) {
    throw Error(ErrorKind::config, "profit needs a 'thresholds' list");
  }
  MiningEconomics econ = parse_economics_csv(in.read(cfg.economics));
  PriceRecord record =
      load_price_record(in.read(cfg.price_record), in.read(cfg.price_sidecar));

  std::vector<ThresholdPoint> points = threshold_sweep(
      econ, record, cfg.thresholds, cfg.draws, cfg.seed, cfg.noise, jobs);

  atomic_write_file(out / "profit_report.json",
                    serialize_profit_report(points, cfg.noise_kind));
  std::string csv = "threshold,mean,lower,upper\n";
  for (const auto& p : points) {
    csv += fmt_double(p.threshold);
    csv += "," + fmt_double(p.stats.mean);
    csv += "," + fmt_double(p.stats.lower);
    csv += "," + fmt_double(p.stats.upper);
    csv += "\n";
  }
  atomic_write_file(out / "profit_vs_threshold.csv", csv);

  if (!cfg.programs.empty() && cfg.have_budget) {
    std::vector<DrProgram> programs = load_programs(cfg, in);
    PortfolioSolution sol = solve_portfolio(programs, econ, cfg.budget_mw,
                                            programs.front().intervals.size());
    atomic_write_file(out / "portfolio.json",
                      portfolio_json(programs, econ, sol, cfg.budget_mw).dump(2) + "\n");
  }

  json settings;
  settings["thresholds"] = cfg.thresholds;
  settings["draws"] = cfg.draws;
  settings["noise"] = cfg.noise_kind;
  if (cfg.have_budget) settings["budget_mw"] = cfg.budget_mw;
  write_manifest(cfg, "profit", in, std::move(settings), json::object());

  std::printf("profit: %zu threshold points, report in %s\n", points.size(),
              (out / "profit_report.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid market simulator and demand-response economics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::uint64_t seed_override = 0;
  std::string format_override;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration JSON")->required();
    sub->add_option("--jobs", jobs, "worker thread cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--format", format_override, "case format override")
        ->check(CLI::IsMember({"native", "mcase"}));
  };

  CLI::App* sim = app.add_subcommand("simulate", "run SCUC/SCED over a day range");
  CLI::App* sweep = app.add_subcommand("sweep", "capacity x location feasibility sweep");
  CLI::App* portfolio = app.add_subcommand("portfolio", "allocate DR capacity across programs");
  CLI::App* profit = app.add_subcommand("profit", "annual profit vs deployment threshold");
  CLI::App* validate = app.add_subcommand("validate", "lint a case file");
  for (CLI::App* sub : {sim, sweep, portfolio, profit, validate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = load_config(config_path);
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0) cfg.seed = seed_override;
    if (!format_override.empty()) cfg.format = format_override;

    if (sub == sim) return cmd_simulate(cfg);
    if (sub == sweep) return cmd_sweep(cfg, jobs);
    if (sub == portfolio) return cmd_portfolio(cfg);
    if (sub == profit) return cmd_profit(cfg, jobs);
    return cmd_validate(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
