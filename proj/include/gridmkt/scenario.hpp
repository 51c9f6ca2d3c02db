#pragma once

#include <string>
#include <vector>

#include "gridmkt/analytics.hpp"
#include "gridmkt/market.hpp"

namespace gridmkt {

struct MiningFacility {
  int bus = 0;
  double capacity_mw = 0.0;
};

// flat constant load additions: every facility draws its full capacity in
// every interval (the fixed-uniform strategy)
struct MiningScenario {
  std::vector<MiningFacility> facilities;
  std::string label;

  double total_mw() const {
    double total = 0.0;
    for (const auto& f : facilities) total += f.capacity_mw;
    return total;
  }
};

inline void validate_scenario(const GridCase& c, const MiningScenario& s) {
  for (const auto& f : s.facilities) {
    if (c.bus_index(f.bus) < 0) {
      throw Error(ErrorKind::reference,
                  "scenario references unknown bus " + std::to_string(f.bus));
    }
    if (!(f.capacity_mw > 0)) {
      throw Error(ErrorKind::invariant,
                  "facility capacity must be positive at bus " + std::to_string(f.bus));
    }
  }
}

// new case with the mining load folded into the demand series; the input case
// is left untouched
inline GridCase inject(const GridCase& c, const MiningScenario& s) {
  validate_scenario(c, s);
  GridCase out = c;
  const std::size_t T = out.intervals();
  for (const auto& f : s.facilities) {
    auto& series = out.demand.series[f.bus];
    if (series.empty()) series.assign(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) series[t] += f.capacity_mw;
  }
  validate_case(out);
  return out;
}

inline MiningScenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::syntax, e.what(), "scenario", line, col);
  }
  detail::reject_unknown_keys(doc, {"label", "facilities"}, "scenario");
  MiningScenario s;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw Error(ErrorKind::syntax, "expected a string", "scenario.label");
    }
    s.label = doc["label"].get<std::string>();
  }
  const json& facilities = detail::require(doc, "facilities", "scenario");
  if (!facilities.is_array()) {
    throw Error(ErrorKind::syntax, "expected an array", "scenario.facilities");
  }
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    std::string where = "scenario.facilities[" + std::to_string(i) + "]";
    const json& f = facilities[i];
    if (!f.is_object()) {
      throw Error(ErrorKind::syntax, "expected an object", where);
    }
    detail::reject_unknown_keys(f, {"bus", "capacity_mw"}, where);
    MiningFacility fac;
    fac.bus = detail::int_at(detail::require(f, "bus", where), where + ".bus");
    fac.capacity_mw =
        detail::number_at(detail::require(f, "capacity_mw", where), where + ".capacity_mw");
    s.facilities.push_back(fac);
  }
  return s;
}

inline std::string serialize_scenario(const MiningScenario& s) {
  json doc;
  doc["label"] = s.label;
  json facilities = json::array();
  for (const auto& f : s.facilities) {
    json row;
    row["bus"] = f.bus;
    row["capacity_mw"] = f.capacity_mw;
    facilities.push_back(std::move(row));
  }
  doc["facilities"] = std::move(facilities);
  return doc.dump();
}

// ---------------------------------------------------------------------------
// capacity x location sweep
// ---------------------------------------------------------------------------
struct SweepSpec {
  std::vector<std::pair<std::string, std::vector<int>>> location_sets;
  std::vector<double> capacities_mw;
  int day_start = 0;
  int day_end = 0;  // exclusive
};

inline SweepSpec parse_sweep_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::syntax, e.what(), "sweep spec", line, col);
  }
  detail::reject_unknown_keys(doc, {"location_sets", "capacities_mw", "days"},
                              "sweep spec");
  SweepSpec spec;
  const json& sets = detail::require(doc, "location_sets", "sweep spec");
  if (!sets.is_object()) {
    throw Error(ErrorKind::syntax, "expected an object", "sweep spec.location_sets");
  }
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    std::string where = "sweep spec.location_sets." + it.key();
    if (!it->is_array() || it->empty()) {
      throw Error(ErrorKind::syntax, "expected a nonempty bus array", where);
    }
    std::vector<int> buses;
    for (std::size_t i = 0; i < it->size(); ++i) {
      buses.push_back(detail::int_at((*it)[i], where + "[" + std::to_string(i) + "]"));
    }
    spec.location_sets.push_back({it.key(), std::move(buses)});
  }
  const json& caps = detail::require(doc, "capacities_mw", "sweep spec");
  if (!caps.is_array() || caps.empty()) {
    throw Error(ErrorKind::syntax, "expected a nonempty array", "sweep spec.capacities_mw");
  }
  for (std::size_t i = 0; i < caps.size(); ++i) {
    double v = detail::number_at(caps[i], "sweep spec.capacities_mw");
    if (v < 0) {
      throw Error(ErrorKind::invariant, "capacities must be nonnegative",
                  "sweep spec.capacities_mw");
    }
    spec.capacities_mw.push_back(v);
  }
  const json& days = detail::require(doc, "days", "sweep spec");
  if (!days.is_array() || days.size() != 2) {
    throw Error(ErrorKind::syntax, "expected [start, end]", "sweep spec.days");
  }
  spec.day_start = detail::int_at(days[0], "sweep spec.days");
  spec.day_end = detail::int_at(days[1], "sweep spec.days");
  if (spec.day_start < 0 || spec.day_end <= spec.day_start) {
    throw Error(ErrorKind::invariant, "day range is empty", "sweep spec.days");
  }
  return spec;
}

inline std::string serialize_sweep_spec(const SweepSpec& spec) {
  json doc;
  json sets = json::object();
  for (const auto& [name, buses] : spec.location_sets) sets[name] = buses;
  doc["location_sets"] = std::move(sets);
  doc["capacities_mw"] = spec.capacities_mw;
  doc["days"] = json::array({spec.day_start, spec.day_end});
  return doc.dump();
}

// equal split of a total capacity across a location set's buses; zero total
// means the baseline (no facilities, label kept empty so records match the
// plain run byte for byte)
inline MiningScenario make_sweep_scenario(const std::string& set_name,
                                          const std::vector<int>& buses,
                                          double total_mw) {
  MiningScenario s;
  if (total_mw <= 0) return s;
  s.label = set_name + "@" + fmt_double(total_mw);
  double per_bus = total_mw / static_cast<double>(buses.size());
  for (int b : buses) s.facilities.push_back({b, per_bus});
  return s;
}

struct SweepCell {
  std::string set_name;
  double capacity_mw = 0.0;
  int feasible_days = 0;
  int infeasible_days = 0;
  int failed_days = 0;
  PriceRecord record;
  bool has_stats = false;
  LmpStats stats;
};

struct SweepReport {
  int day_start = 0;
  int day_end = 0;
  std::vector<SweepCell> cells;  // location-set major, capacity minor
};

inline SweepReport capacity_sweep(const GridCase& c, const SweepSpec& spec,
                                  const MarketOptions& market = {},
                                  const AnalyticsOptions& analytics = {},
                                  int jobs = 1, std::uint64_t seed = 0) {
  SweepReport report;
  report.day_start = spec.day_start;
  report.day_end = spec.day_end;
  std::size_t cells = spec.location_sets.size() * spec.capacities_mw.size();
  report.cells.assign(cells, {});

  parallel_for_index(cells, jobs, [&](std::size_t idx) {
    std::size_t set_i = idx / spec.capacities_mw.size();
    std::size_t cap_i = idx % spec.capacities_mw.size();
    const auto& [set_name, buses] = spec.location_sets[set_i];
    double capacity = spec.capacities_mw[cap_i];

    SweepCell cell;
    cell.set_name = set_name;
    cell.capacity_mw = capacity;
    MiningScenario scenario = make_sweep_scenario(set_name, buses, capacity);
    GridCase injected = inject(c, scenario);
    HorizonResult run = run_horizon(injected, spec.day_start, spec.day_end, market,
                                    scenario.label, seed);
    cell.record = std::move(run.record);
    for (DayStatus s : cell.record.day_status) {
      switch (s) {
        case DayStatus::optimal: ++cell.feasible_days; break;
        case DayStatus::infeasible: ++cell.infeasible_days; break;
        case DayStatus::failed_to_converge: ++cell.failed_days; break;
      }
    }
    if (cell.feasible_days > 0) {
      cell.stats = compute_stats(cell.record, injected, analytics);
      cell.has_stats = true;
    }
    report.cells[idx] = std::move(cell);
  });
  return report;
}

// `set,capacity_mw,feasible_days,infeasible_days,failed_days,overall_mean,
//  window_mean,std_dev` with stats blank for cells without a feasible day
inline std::string serialize_sweep_csv(const SweepReport& report,
                                       const AnalyticsOptions& analytics = {}) {
  std::string out =
      "set,capacity_mw,feasible_days,infeasible_days,failed_days,"
      "overall_mean,window_mean,std_dev\n";
  for (const auto& cell : report.cells) {
    out += cell.set_name;
    out += "," + fmt_double(cell.capacity_mw);
    out += "," + std::to_string(cell.feasible_days);
    out += "," + std::to_string(cell.infeasible_days);
    out += "," + std::to_string(cell.failed_days);
    if (cell.has_stats) {
      out += "," + fmt_double(cell.stats.overall_mean);
      out += "," + fmt_double(cell.stats.window_mean(analytics.window_start,
                                                     analytics.window_end));
      out += "," + fmt_double(cell.stats.std_dev);
    } else {
      out += ",,,";
    }
    out += "\n";
  }
  return out;
}

}  // namespace gridmkt
