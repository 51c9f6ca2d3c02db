#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gridmkt/analytics.hpp"
#include "gridmkt/simplex.hpp"

namespace gridmkt {

enum class ProgramKind { reserve_record, price_driven };

// A demand response program as seen by a miner: per-interval availability
// revenue and expected deployment. `intervals` holds the absolute interval
// index of each entry, which also addresses the economics series.
struct DrProgram {
  std::string name;
  ProgramKind kind = ProgramKind::reserve_record;
  std::vector<int> intervals;
  std::vector<double> revenue;     // $/MWh availability payment
  std::vector<double> deployment;  // expected deployed fraction in [0, 1]
  double threshold = 0.0;          // price_driven only, $/MWh
};

struct MiningEconomics {
  std::vector<double> btc_price;    // $/BTC per interval
  std::vector<double> difficulty;   // MWh/BTC per interval
  std::vector<double> elec_price;   // $/MWh per interval

  std::size_t intervals() const { return btc_price.size(); }
};

inline void validate_program(const DrProgram& p) {
  if (p.intervals.size() != p.revenue.size() ||
      p.intervals.size() != p.deployment.size()) {
    throw Error(ErrorKind::invariant, "program '" + p.name + "' series lengths differ");
  }
  for (std::size_t t = 0; t < p.deployment.size(); ++t) {
    if (p.deployment[t] < 0.0 || p.deployment[t] > 1.0) {
      throw Error(ErrorKind::invariant,
                  "program '" + p.name + "' deployment " + fmt_double(p.deployment[t]) +
                      " outside [0, 1] at entry " + std::to_string(t));
    }
  }
}

inline void validate_economics(const MiningEconomics& e) {
  if (e.difficulty.size() != e.btc_price.size() ||
      e.elec_price.size() != e.btc_price.size()) {
    throw Error(ErrorKind::invariant, "economics series lengths differ");
  }
  for (std::size_t t = 0; t < e.difficulty.size(); ++t) {
    if (!(e.difficulty[t] > 0)) {
      throw Error(ErrorKind::invariant,
                  "difficulty must be positive at interval " + std::to_string(t));
    }
  }
}

// expected net reward of mining one MWh at interval t: coin value per MWh
// minus the electricity price; negative when mining runs at a loss
inline double net_reward(const MiningEconomics& e, int t) {
  if (t < 0 || t >= static_cast<int>(e.intervals())) {
    throw Error(ErrorKind::invariant,
                "interval " + std::to_string(t) + " outside the economics horizon");
  }
  return e.btc_price[t] / e.difficulty[t] - e.elec_price[t];
}

// per-MW score of enrolling in a program: availability revenue minus the
// mining reward lost during deployment, summed over its horizon
inline double program_score(const DrProgram& p, const MiningEconomics& e) {
  double score = 0.0;
  for (std::size_t t = 0; t < p.intervals.size(); ++t) {
    score += p.revenue[t] - p.deployment[t] * net_reward(e, p.intervals[t]);
  }
  return score;
}

struct PortfolioSolution {
  std::vector<double> capacities;  // MW per program
  double expected_profit = 0.0;
  int binding = -1;  // program index holding the full budget, -1 when opted out
};

// Capacity split across programs maximizing total expected profit subject to
// c >= 0, sum c <= C. The objective is linear, so an optimal solution sits at
// a vertex: everything on the best positive-score program, or all zeros.
inline PortfolioSolution solve_portfolio(const std::vector<DrProgram>& programs,
                                         const MiningEconomics& econ, double budget_mw,
                                         std::size_t horizon) {
  if (programs.empty()) {
    throw Error(ErrorKind::invariant, "portfolio needs at least one program");
  }
  if (!(budget_mw > 0)) {
    throw Error(ErrorKind::invariant, "capacity budget must be positive");
  }
  LinearProgram lp;
  for (const auto& p : programs) {
    validate_program(p);
    if (p.intervals.size() != horizon) {
      throw Error(ErrorKind::invariant, "program '" + p.name + "' has " +
                      std::to_string(p.intervals.size()) + " entries, expected " +
                      std::to_string(horizon));
    }
    lp.add_variable(0.0, kInf, -program_score(p, econ));  // maximize => negate
  }
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < lp.num_vars(); ++i) row.push_back({i, 1.0});
  lp.add_row(RowSense::le, budget_mw, std::move(row));

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw Error(ErrorKind::structural,
                std::string("portfolio LP did not solve: ") + to_string(sol.status));
  }
  PortfolioSolution out;
  out.capacities = sol.x;
  out.expected_profit = -sol.objective;
  for (std::size_t i = 0; i < out.capacities.size(); ++i) {
    if (out.capacities[i] > 0.5 * budget_mw) {
      out.binding = static_cast<int>(i);
      break;
    }
  }
  return out;
}

// brute-force check over the N+1 candidate vertices {0} and {C e_i}
inline PortfolioSolution vertex_oracle(const std::vector<DrProgram>& programs,
                                       const MiningEconomics& econ, double budget_mw,
                                       std::size_t horizon) {
  if (programs.empty()) {
    throw Error(ErrorKind::invariant, "portfolio needs at least one program");
  }
  PortfolioSolution out;
  out.capacities.assign(programs.size(), 0.0);
  for (std::size_t i = 0; i < programs.size(); ++i) {
    validate_program(programs[i]);
    if (programs[i].intervals.size() != horizon) {
      throw Error(ErrorKind::invariant, "program '" + programs[i].name + "' has " +
                      std::to_string(programs[i].intervals.size()) +
                      " entries, expected " + std::to_string(horizon));
    }
    double profit = budget_mw * program_score(programs[i], econ);
    if (profit > out.expected_profit) {
      out.expected_profit = profit;
      out.binding = static_cast<int>(i);
    }
  }
  if (out.binding >= 0) out.capacities[out.binding] = budget_mw;
  return out;
}

// deployment decision per feasible interval of the record: deploy when the
// bus-average LMP clears the threshold
inline std::vector<unsigned char> price_driven_deployment(const PriceRecord& record,
                                                          double threshold) {
  std::vector<int> intervals;
  std::vector<double> avg;
  average_lmp_series(record, intervals, avg);
  std::vector<unsigned char> d(avg.size(), 0);
  for (std::size_t t = 0; t < avg.size(); ++t) d[t] = avg[t] > threshold ? 1 : 0;
  return d;
}

struct NoiseSpec {
  enum class Kind { none, gaussian, bootstrap };
  Kind kind = Kind::none;
  double sigma = 0.0;              // gaussian
  std::vector<double> residuals;   // bootstrap pool
};

inline NoiseSpec make_gaussian_noise(double sigma) {
  if (!(sigma >= 0)) {
    throw Error(ErrorKind::config, "noise sigma must be nonnegative");
  }
  return {NoiseSpec::Kind::gaussian, sigma, {}};
}

inline NoiseSpec make_bootstrap_noise(std::vector<double> residuals) {
  if (residuals.empty()) {
    throw Error(ErrorKind::config, "bootstrap noise needs a nonempty residual pool");
  }
  return {NoiseSpec::Kind::bootstrap, 0.0, std::move(residuals)};
}

struct ProfitStats {
  double mean = 0.0;
  double lower = 0.0;   // 2.5th percentile over draws
  double upper = 0.0;   // 97.5th percentile
  int draws = 0;
  std::uint64_t seed = 0;
  double annualization = 0.0;  // 8760 / T
};

namespace detail {

inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  double rank = q * (v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(rank);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = rank - lo;
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

inline void apply_noise(std::vector<double>& series, const NoiseSpec& noise,
                        SplitMix64& rng) {
  switch (noise.kind) {
    case NoiseSpec::Kind::none:
      return;
    case NoiseSpec::Kind::gaussian:
      for (double& v : series) v += noise.sigma * rng.normal();
      return;
    case NoiseSpec::Kind::bootstrap:
      for (double& v : series) {
        v += noise.residuals[rng.below(noise.residuals.size())];
      }
      return;
  }
}

}  // namespace detail

// Annualized per-MW profit of one program with Monte-Carlo price noise.
// Reserve-record programs keep their recorded revenue and deployment series;
// price-driven programs are paid the (noisy) average LMP and deployed by
// threshold, re-decided per draw. Draw k uses the substream (seed, k), so
// results are independent of worker count and shared across thresholds.
inline ProfitStats annual_profit(const DrProgram& program, const MiningEconomics& econ,
                                 const PriceRecord& record, int draws,
                                 std::uint64_t seed, const NoiseSpec& noise,
                                 int jobs = 1) {
  if (draws < 1) {
    throw Error(ErrorKind::config, "draw count must be at least 1");
  }
  validate_economics(econ);

  std::vector<int> intervals;
  std::vector<double> base;
  if (program.kind == ProgramKind::price_driven) {
    average_lmp_series(record, intervals, base);
    if (intervals.empty()) {
      throw Error(ErrorKind::invariant, "price record has no feasible interval");
    }
  } else {
    validate_program(program);
    intervals = program.intervals;
    if (intervals.empty()) {
      throw Error(ErrorKind::invariant, "program '" + program.name + "' is empty");
    }
  }
  const std::size_t T = intervals.size();
  const double annualize = 8760.0 / static_cast<double>(T);
  std::vector<double> reward(T);
  for (std::size_t t = 0; t < T; ++t) reward[t] = net_reward(econ, intervals[t]);

  std::vector<double> profits(draws, 0.0);
  parallel_for_index(draws, jobs, [&](std::size_t k) {
    SplitMix64 rng(substream(seed, k));
    double sum = 0.0;
    if (program.kind == ProgramKind::price_driven) {
      std::vector<double> lmp = base;
      detail::apply_noise(lmp, noise, rng);
      for (std::size_t t = 0; t < T; ++t) {
        bool deployed = lmp[t] > program.threshold;
        sum += lmp[t] - (deployed ? reward[t] : 0.0);
      }
    } else {
      for (std::size_t t = 0; t < T; ++t) {
        sum += program.revenue[t] - program.deployment[t] * reward[t];
      }
    }
    profits[k] = annualize * sum;
  });

  ProfitStats out;
  out.draws = draws;
  out.seed = seed;
  out.annualization = annualize;
  double acc = 0.0;
  for (double p : profits) acc += p;
  out.mean = acc / draws;
  out.lower = detail::percentile(profits, 0.025);
  out.upper = detail::percentile(profits, 0.975);
  return out;
}

struct ThresholdPoint {
  double threshold = 0.0;
  ProfitStats stats;
};

// profit-vs-threshold curve for the price-driven program; one shared seed
// stream keeps draws comparable across threshold points
inline std::vector<ThresholdPoint> threshold_sweep(const MiningEconomics& econ,
                                                   const PriceRecord& record,
                                                   const std::vector<double>& thresholds,
                                                   int draws, std::uint64_t seed,
                                                   const NoiseSpec& noise,
                                                   int jobs = 1) {
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw Error(ErrorKind::config, "thresholds must be strictly ascending");
    }
  }
  std::vector<ThresholdPoint> out;
  for (double th : thresholds) {
    DrProgram p;
    p.name = "price_driven";
    p.kind = ProgramKind::price_driven;
    p.threshold = th;
    out.push_back({th, annual_profit(p, econ, record, draws, seed, noise, jobs)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV interfaces
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<std::vector<std::string>> read_csv_table(std::string_view text,
                                                            const std::string& what,
                                                            std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t s = 0;
    while (s <= line.size()) {
      std::size_t e = line.find(',', s);
      if (e == std::string_view::npos) e = line.size();
      cells.emplace_back(line.substr(s, e - s));
      s = e + 1;
      if (e == line.size()) break;
    }
    if (cells.size() != columns) {
      throw Error(ErrorKind::syntax,
                  "expected " + std::to_string(columns) + " columns, found " +
                      std::to_string(cells.size()),
                  what + " line " + std::to_string(line_no));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) {
    throw Error(ErrorKind::syntax, "empty table", what);
  }
  return rows;
}

}  // namespace detail

// `interval,btc_usd,difficulty_mwh_per_btc,elec_price_usd_mwh`, contiguous
// intervals from 0
inline MiningEconomics parse_economics_csv(std::string_view text) {
  auto rows = detail::read_csv_table(text, "economics CSV", 4);
  MiningEconomics e;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::string where = "economics CSV line " + std::to_string(i + 1);
    int interval = static_cast<int>(parse_double(rows[i][0], where));
    if (interval != static_cast<int>(i - 1)) {
      throw Error(ErrorKind::invariant,
                  "intervals must be contiguous from 0; found " +
                      std::to_string(interval),
                  where);
    }
    e.btc_price.push_back(parse_double(rows[i][1], where));
    e.difficulty.push_back(parse_double(rows[i][2], where));
    e.elec_price.push_back(parse_double(rows[i][3], where));
  }
  validate_economics(e);
  return e;
}

inline std::string serialize_economics_csv(const MiningEconomics& e) {
  std::string out = "interval,btc_usd,difficulty_mwh_per_btc,elec_price_usd_mwh\n";
  for (std::size_t t = 0; t < e.intervals(); ++t) {
    out += std::to_string(t);
    out += "," + fmt_double(e.btc_price[t]);
    out += "," + fmt_double(e.difficulty[t]);
    out += "," + fmt_double(e.elec_price[t]);
    out += "\n";
  }
  return out;
}

// `interval,revenue_usd_mwh,deployment_frac`; intervals strictly ascending,
// addressing the economics series
inline DrProgram parse_program_csv(std::string_view text, const std::string& name) {
  auto rows = detail::read_csv_table(text, "program CSV", 3);
  DrProgram p;
  p.name = name;
  p.kind = ProgramKind::reserve_record;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::string where = "program CSV line " + std::to_string(i + 1);
    int interval = static_cast<int>(parse_double(rows[i][0], where));
    if (!p.intervals.empty() && interval <= p.intervals.back()) {
      throw Error(ErrorKind::invariant, "intervals must be strictly ascending", where);
    }
    p.intervals.push_back(interval);
    p.revenue.push_back(parse_double(rows[i][1], where));
    p.deployment.push_back(parse_double(rows[i][2], where));
  }
  validate_program(p);
  return p;
}

inline std::string serialize_program_csv(const DrProgram& p) {
  std::string out = "interval,revenue_usd_mwh,deployment_frac\n";
  for (std::size_t t = 0; t < p.intervals.size(); ++t) {
    out += std::to_string(p.intervals[t]);
    out += "," + fmt_double(p.revenue[t]);
    out += "," + fmt_double(p.deployment[t]);
    out += "\n";
  }
  return out;
}

// ProfitReport JSON: thresholds with mean/lower/upper arrays plus the
// sampling metadata needed to reproduce the run
inline std::string serialize_profit_report(const std::vector<ThresholdPoint>& points,
                                           const std::string& noise_kind) {
  json doc;
  json th = json::array(), mean = json::array(), lower = json::array(),
       upper = json::array();
  for (const auto& p : points) {
    th.push_back(p.threshold);
    mean.push_back(p.stats.mean);
    lower.push_back(p.stats.lower);
    upper.push_back(p.stats.upper);
  }
  doc["thresholds"] = std::move(th);
  doc["mean"] = std::move(mean);
  doc["lower"] = std::move(lower);
  doc["upper"] = std::move(upper);
  if (!points.empty()) {
    doc["draws"] = points.front().stats.draws;
    doc["seed"] = points.front().stats.seed;
    doc["annualization"] = points.front().stats.annualization;
  }
  doc["bounds"] = "percentile_2.5_97.5";
  doc["noise"] = noise_kind;
  return doc.dump();
}

}  // namespace gridmkt
