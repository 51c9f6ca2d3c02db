#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gridmkt/market.hpp"

namespace gridmkt {

struct AnalyticsOptions {
  int window_start = 15;  // peak window, exclusive end
  int window_end = 17;
  bool load_weighted = false;      // weight bus means by that interval's demand
  bool stddev_bus_samples = false; // spread over every bus-interval LMP sample
                                   // instead of the per-interval mean series
};

struct LmpStats {
  std::vector<double> avg_lmp;       // per local interval, NaN when infeasible
  std::array<double, 24> hourly_lmp{};  // day-mean of avg_lmp per hour of day
  double overall_mean = 0.0;
  double std_dev = 0.0;
  std::map<std::string, std::vector<double>> county_lmp;  // per-interval series
  int feasible_intervals = 0;
  int total_intervals = 0;

  double window_mean(int start_h, int end_h) const {
    if (start_h < 0 || end_h > 24 || start_h >= end_h) {
      throw Error(ErrorKind::config, "bad hour window [" + std::to_string(start_h) +
                                         ", " + std::to_string(end_h) + ")");
    }
    double sum = 0.0;
    for (int h = start_h; h < end_h; ++h) sum += hourly_lmp[h];
    return sum / (end_h - start_h);
  }
};

namespace detail {

inline double bus_mean_lmp(const PriceRecord& r, const std::vector<double>& weights,
                           int local_t, bool weighted) {
  const auto& row = r.lmp[local_t];
  if (weighted) {
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (wsum > 0) {
      double acc = 0.0;
      for (std::size_t b = 0; b < row.size(); ++b) acc += weights[b] * row[b];
      return acc / wsum;
    }
  }
  double acc = 0.0;
  for (double v : row) acc += v;
  return acc / static_cast<double>(row.size());
}

}  // namespace detail

// the feasible intervals' bus-average LMP, with their absolute interval ids
inline void average_lmp_series(const PriceRecord& r, std::vector<int>& intervals,
                               std::vector<double>& values) {
  intervals.clear();
  values.clear();
  for (int t = 0; t < r.num_intervals(); ++t) {
    if (!r.interval_feasible(t)) continue;
    double acc = 0.0;
    for (double v : r.lmp[t]) acc += v;
    intervals.push_back(r.absolute_interval(t));
    values.push_back(acc / static_cast<double>(r.bus_ids.size()));
  }
}

inline LmpStats compute_stats(const PriceRecord& r, const GridCase& c,
                              const AnalyticsOptions& opts = {}) {
  LmpStats s;
  s.total_intervals = r.num_intervals();
  if (r.bus_ids.empty()) {
    throw Error(ErrorKind::invariant, "price record has no buses");
  }

  // positions of the record's buses in the case, for demand weights and counties
  std::vector<int> case_pos(r.bus_ids.size(), -1);
  for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
    case_pos[b] = c.bus_index(r.bus_ids[b]);
    if (case_pos[b] < 0) {
      throw Error(ErrorKind::reference,
                  "record bus " + std::to_string(r.bus_ids[b]) + " missing from case");
    }
  }

  std::map<std::string, std::vector<std::size_t>> county_members;
  for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
    const auto& county = c.buses[case_pos[b]].county;
    if (county) county_members[*county].push_back(b);
  }
  for (const auto& [name, members] : county_members) {
    s.county_lmp[name].assign(s.total_intervals,
                              std::numeric_limits<double>::quiet_NaN());
  }

  s.avg_lmp.assign(s.total_intervals, std::numeric_limits<double>::quiet_NaN());
  std::array<double, 24> hour_sum{};
  std::array<int, 24> hour_count{};
  double total_sum = 0.0;

  std::vector<double> weights(r.bus_ids.size(), 0.0);
  for (int t = 0; t < s.total_intervals; ++t) {
    if (!r.interval_feasible(t)) continue;
    if (opts.load_weighted) {
      int abs_t = r.absolute_interval(t);
      for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
        auto it = c.demand.series.find(r.bus_ids[b]);
        weights[b] = it == c.demand.series.end() ? 0.0 : it->second[abs_t];
      }
    }
    double avg = detail::bus_mean_lmp(r, weights, t, opts.load_weighted);
    s.avg_lmp[t] = avg;
    ++s.feasible_intervals;
    total_sum += avg;
    hour_sum[t % 24] += avg;
    ++hour_count[t % 24];

    for (const auto& [name, members] : county_members) {
      double acc = 0.0;
      for (std::size_t b : members) acc += r.lmp[t][b];
      s.county_lmp[name][t] = acc / static_cast<double>(members.size());
    }
  }
  if (s.feasible_intervals == 0) {
    throw Error(ErrorKind::invariant, "price record has no feasible interval");
  }

  s.overall_mean = total_sum / s.feasible_intervals;
  for (int h = 0; h < 24; ++h) {
    s.hourly_lmp[h] = hour_count[h] > 0 ? hour_sum[h] / hour_count[h]
                                        : std::numeric_limits<double>::quiet_NaN();
  }

  if (opts.stddev_bus_samples) {
    double mean = 0.0;
    long n = 0;
    for (int t = 0; t < s.total_intervals; ++t) {
      if (!r.interval_feasible(t)) continue;
      for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
        mean += r.lmp[t][b];
        ++n;
      }
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (int t = 0; t < s.total_intervals; ++t) {
      if (!r.interval_feasible(t)) continue;
      for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
        double d = r.lmp[t][b] - mean;
        var += d * d;
      }
    }
    s.std_dev = std::sqrt(var / static_cast<double>(n));
  } else {
    double var = 0.0;
    for (int t = 0; t < s.total_intervals; ++t) {
      if (!r.interval_feasible(t)) continue;
      double d = s.avg_lmp[t] - s.overall_mean;
      var += d * d;
    }
    s.std_dev = std::sqrt(var / s.feasible_intervals);  // population form
  }
  return s;
}

struct ComparisonRow {
  double delta_overall_mean = 0.0;
  double delta_window_mean = 0.0;
  double delta_std_dev = 0.0;
  bool non_uniform = false;  // peak window moved more than the overall mean
};

inline ComparisonRow compare(const LmpStats& baseline, const LmpStats& scenario,
                             int window_start = 15, int window_end = 17) {
  if (baseline.total_intervals != scenario.total_intervals) {
    throw Error(ErrorKind::invariant,
                "cannot compare records with different horizons (" +
                    std::to_string(baseline.total_intervals) + " vs " +
                    std::to_string(scenario.total_intervals) + " intervals)");
  }
  ComparisonRow row;
  row.delta_overall_mean = scenario.overall_mean - baseline.overall_mean;
  row.delta_window_mean = scenario.window_mean(window_start, window_end) -
                          baseline.window_mean(window_start, window_end);
  row.delta_std_dev = scenario.std_dev - baseline.std_dev;
  row.non_uniform = row.delta_window_mean > row.delta_overall_mean;
  return row;
}

inline std::map<std::string, double> county_table(const PriceRecord& r,
                                                  const GridCase& c, int local_t) {
  if (local_t < 0 || local_t >= r.num_intervals() || !r.interval_feasible(local_t)) {
    throw Error(ErrorKind::invariant,
                "interval " + std::to_string(local_t) + " is not feasible");
  }
  std::map<std::string, std::pair<double, int>> acc;
  for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
    int pos = c.bus_index(r.bus_ids[b]);
    if (pos < 0 || !c.buses[pos].county) continue;
    auto& slot = acc[*c.buses[pos].county];
    slot.first += r.lmp[local_t][b];
    slot.second += 1;
  }
  std::map<std::string, double> out;
  for (const auto& [name, slot] : acc) out[name] = slot.first / slot.second;
  return out;
}

// ---------------------------------------------------------------------------
// plot-ready exports
// ---------------------------------------------------------------------------
inline std::string serialize_stats_csv(const LmpStats& s, int first_day) {
  std::string out = "interval,avg_lmp\n";
  for (int t = 0; t < s.total_intervals; ++t) {
    if (std::isnan(s.avg_lmp[t])) continue;
    out += std::to_string(first_day * 24 + t);
    out += ",";
    out += fmt_double(s.avg_lmp[t]);
    out += "\n";
  }
  return out;
}

inline std::string serialize_hourly_csv(const LmpStats& s) {
  std::string out = "hour,avg_lmp\n";
  for (int h = 0; h < 24; ++h) {
    out += std::to_string(h);
    out += ",";
    out += std::isnan(s.hourly_lmp[h]) ? "" : fmt_double(s.hourly_lmp[h]);
    out += "\n";
  }
  return out;
}

inline std::string serialize_county_csv(const std::map<std::string, double>& table) {
  std::string out = "county,avg_lmp\n";
  for (const auto& [name, v] : table) {
    out += name;
    out += ",";
    out += fmt_double(v);
    out += "\n";
  }
  return out;
}

}  // namespace gridmkt
