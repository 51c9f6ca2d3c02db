#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gridmkt/branch_bound.hpp"
#include "gridmkt/case_io.hpp"
#include "gridmkt/network.hpp"

namespace gridmkt {

enum class DayStatus { optimal, infeasible, failed_to_converge };

inline const char* to_string(DayStatus s) {
  switch (s) {
    case DayStatus::optimal: return "optimal";
    case DayStatus::infeasible: return "infeasible";
    case DayStatus::failed_to_converge: return "failed_to_converge";
  }
  return "?";
}

inline DayStatus day_status_from_string(const std::string& s) {
  if (s == "optimal") return DayStatus::optimal;
  if (s == "infeasible") return DayStatus::infeasible;
  if (s == "failed_to_converge") return DayStatus::failed_to_converge;
  throw Error(ErrorKind::syntax, "unknown day status '" + s + "'");
}

struct MarketOptions {
  int reference_bus = -1;  // -1 picks the default reference
  double mbp_gap = 1e-8;
  long node_cap = 20000;
  SimplexOptions lp;
  int lazy_rounds = 30;
  double flow_tol = 1e-6;
};

// on/off per (generator, hour) for one day; units that never need commitment
// are reported as always on
struct CommitmentSchedule {
  std::vector<std::vector<unsigned char>> on;  // [generator][hour]

  bool operator==(const CommitmentSchedule&) const = default;
};

struct DispatchResult {
  DayStatus status = DayStatus::failed_to_converge;
  double objective = 0.0;
  std::vector<std::vector<double>> generation;  // [hour][generator]
  std::vector<std::vector<double>> renewable;   // [hour][site]
  std::vector<double> system_lambda;            // [hour]
  std::vector<std::vector<double>> lmp;         // [hour][bus position]
  std::vector<std::vector<double>> flow;        // [hour][network branch row]
  std::vector<std::vector<double>> mu_upper;    // [hour][network branch row]
  std::vector<std::vector<double>> mu_lower;    // [hour][network branch row]
};

namespace detail {

// linear expression for one generator-hour output
struct PExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;
};

struct DayModel {
  LinearProgram lp;
  std::vector<int> binaries;
  std::vector<std::vector<int>> u_var;    // [gen][hour], -1 when fixed
  std::vector<std::vector<PExpr>> power;  // [gen][hour]
  std::vector<std::vector<int>> ren_var;  // [site][hour], -1 when zero
  std::vector<int> balance_row;           // [hour]
  std::vector<std::vector<double>> bus_load;  // [hour][bus position]
  std::map<int, int> bus_pos;
  int hours = 24;
  double fixed_cost = 0.0;

  struct LineRow {
    int branch_row;  // index into NetworkModel::branch_rows
    int hour;
    int dir;  // +1 upper limit, -1 lower limit
    int row;
  };
  std::vector<LineRow> line_rows;

  bool has_line_row(int branch_row, int hour, int dir) const {
    for (const auto& lr : line_rows) {
      if (lr.branch_row == branch_row && lr.hour == hour && lr.dir == dir) return true;
    }
    return false;
  }
};

inline DayModel build_day_model(const GridCase& c, int day, int hours,
                                const CommitmentSchedule* fixed,
                                const std::vector<unsigned char>* u_prev,
                                const std::vector<double>* p_prev) {
  const int T = hours;
  const int offset = day * 24;
  const int G = static_cast<int>(c.generators.size());
  const int W = static_cast<int>(c.renewables.size());

  DayModel m;
  m.hours = T;
  m.bus_pos = c.bus_positions();
  m.u_var.assign(G, std::vector<int>(T, -1));
  m.power.assign(G, std::vector<PExpr>(T));
  m.ren_var.assign(W, std::vector<int>(T, -1));
  m.bus_load.assign(T, std::vector<double>(c.buses.size(), 0.0));
  for (const auto& [bus, series] : c.demand.series) {
    int pos = m.bus_pos.at(bus);
    for (int t = 0; t < T; ++t) m.bus_load[t][pos] = series[offset + t];
  }

  for (int g = 0; g < G; ++g) {
    const Generator& gen = c.generators[g];
    auto widths = gen.cost_curve.widths(gen.p_min);
    bool uc = gen.needs_commitment();
    for (int t = 0; t < T; ++t) {
      PExpr& p = m.power[g][t];
      if (!uc) {
        for (std::size_t k = 0; k < widths.size(); ++k) {
          int v = m.lp.add_variable(0.0, widths[k], gen.cost_curve.segments[k].slope);
          p.terms.push_back({v, 1.0});
        }
        continue;
      }
      if (fixed) {
        bool on = fixed->on[g][t] != 0;
        bool prev_on = t > 0 ? fixed->on[g][t - 1] != 0
                             : (u_prev && (*u_prev)[g] != 0);
        if (on && !prev_on) m.fixed_cost += gen.startup_cost;
        if (!on) continue;  // output is the zero expression
        m.fixed_cost += gen.no_load_cost;
        p.constant = gen.p_min;
        for (std::size_t k = 0; k < widths.size(); ++k) {
          int v = m.lp.add_variable(0.0, widths[k], gen.cost_curve.segments[k].slope);
          p.terms.push_back({v, 1.0});
        }
      } else {
        int u = m.lp.add_variable(0.0, 1.0, gen.no_load_cost);
        int s = m.lp.add_variable(0.0, 1.0, gen.startup_cost);
        m.u_var[g][t] = u;
        m.binaries.push_back(u);
        p.terms.push_back({u, gen.p_min});
        std::vector<std::pair<int, double>> gating{{u, -(gen.p_max - gen.p_min)}};
        for (std::size_t k = 0; k < widths.size(); ++k) {
          int v = m.lp.add_variable(0.0, widths[k], gen.cost_curve.segments[k].slope);
          p.terms.push_back({v, 1.0});
          gating.push_back({v, 1.0});
        }
        m.lp.add_row(RowSense::le, 0.0, std::move(gating));
        // startup indicator: s_t >= u_t - u_{t-1}
        if (t > 0) {
          m.lp.add_row(RowSense::le, 0.0,
                       {{u, 1.0}, {m.u_var[g][t - 1], -1.0}, {s, -1.0}});
        } else {
          double up = (u_prev && (*u_prev)[g] != 0) ? 1.0 : 0.0;
          m.lp.add_row(RowSense::le, up, {{u, 1.0}, {s, -1.0}});
        }
      }
    }
  }

  for (int w = 0; w < W; ++w) {
    for (int t = 0; t < T; ++t) {
      double cap = c.renewables[w].series[offset + t];
      if (cap > 0) m.ren_var[w][t] = m.lp.add_variable(0.0, cap, 0.0);
    }
  }

  // hourly system balance
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> row;
    double rhs = c.total_demand(offset + t);
    for (int g = 0; g < G; ++g) {
      rhs -= m.power[g][t].constant;
      for (auto [v, coef] : m.power[g][t].terms) row.push_back({v, coef});
    }
    for (int w = 0; w < W; ++w) {
      if (m.ren_var[w][t] >= 0) row.push_back({m.ren_var[w][t], 1.0});
    }
    m.balance_row.push_back(m.lp.add_row(RowSense::eq, rhs, std::move(row)));
  }

  // ramp coupling; rows are skipped when the limit can never bind
  for (int g = 0; g < G; ++g) {
    const Generator& gen = c.generators[g];
    if (!std::isfinite(gen.ramp_limit) || gen.ramp_limit >= gen.p_max) continue;
    for (int t = 0; t < T; ++t) {
      const PExpr* prev = t > 0 ? &m.power[g][t - 1] : nullptr;
      double prev_const;
      if (t == 0) {
        if (!p_prev) continue;  // first simulated day: hour 0 is unconstrained
        prev_const = (*p_prev)[g];
      } else {
        prev_const = prev->constant;
      }
      const PExpr& cur = m.power[g][t];
      if (cur.terms.empty() && (!prev || prev->terms.empty())) continue;
      std::vector<std::pair<int, double>> up_row, down_row;
      for (auto [v, coef] : cur.terms) {
        up_row.push_back({v, coef});
        down_row.push_back({v, -coef});
      }
      if (prev) {
        for (auto [v, coef] : prev->terms) {
          up_row.push_back({v, -coef});
          down_row.push_back({v, coef});
        }
      }
      double delta_const = cur.constant - prev_const;
      m.lp.add_row(RowSense::le, gen.ramp_limit - delta_const, std::move(up_row));
      m.lp.add_row(RowSense::le, gen.ramp_limit + delta_const, std::move(down_row));
    }
  }
  return m;
}

inline void add_line_row(DayModel& m, const GridCase& c, const NetworkModel& net,
                         int branch_row, int hour, int dir) {
  const Branch& br = c.branches[net.branch_rows[branch_row]];
  std::vector<std::pair<int, double>> row;
  double rhs = dir > 0 ? *br.flow_limit : -*br.flow_limit;
  for (std::size_t n = 0; n < c.buses.size(); ++n) {
    rhs += net.ptdf(branch_row, n) * m.bus_load[hour][n];
  }
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    double f = net.ptdf(branch_row, m.bus_pos.at(c.generators[g].bus));
    if (f == 0.0) continue;
    rhs -= f * m.power[g][hour].constant;
    for (auto [v, coef] : m.power[g][hour].terms) row.push_back({v, f * coef});
  }
  for (std::size_t w = 0; w < c.renewables.size(); ++w) {
    int v = m.ren_var[w][hour];
    if (v < 0) continue;
    double f = net.ptdf(branch_row, m.bus_pos.at(c.renewables[w].bus));
    if (f != 0.0) row.push_back({v, f});
  }
  int r = m.lp.add_row(dir > 0 ? RowSense::le : RowSense::ge, rhs, std::move(row));
  m.line_rows.push_back({branch_row, hour, dir, r});
}

// net bus injections implied by a solution vector, then branch flows
inline std::vector<std::vector<double>> model_flows(const DayModel& m,
                                                    const GridCase& c,
                                                    const NetworkModel& net,
                                                    const std::vector<double>& x) {
  const int T = m.hours;
  const int L = static_cast<int>(net.branch_rows.size());
  std::vector<std::vector<double>> flows(T, std::vector<double>(L, 0.0));
  for (int t = 0; t < T; ++t) {
    std::vector<double> inj(c.buses.size(), 0.0);
    for (std::size_t n = 0; n < c.buses.size(); ++n) inj[n] = -m.bus_load[t][n];
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
      const PExpr& p = m.power[g][t];
      double v = p.constant;
      for (auto [idx, coef] : p.terms) v += coef * x[idx];
      inj[m.bus_pos.at(c.generators[g].bus)] += v;
    }
    for (std::size_t w = 0; w < c.renewables.size(); ++w) {
      if (m.ren_var[w][t] >= 0) {
        inj[m.bus_pos.at(c.renewables[w].bus)] += x[m.ren_var[w][t]];
      }
    }
    for (int l = 0; l < L; ++l) {
      double f = 0.0;
      for (std::size_t n = 0; n < c.buses.size(); ++n) {
        f += net.ptdf(l, static_cast<int>(n)) * inj[n];
      }
      flows[t][l] = f;
    }
  }
  return flows;
}

// scan for overloads not yet covered by a row; returns true when rows were added
inline bool add_violated_line_rows(DayModel& m, const GridCase& c,
                                   const NetworkModel& net,
                                   const std::vector<std::vector<double>>& flows,
                                   double tol) {
  bool added = false;
  for (int t = 0; t < m.hours; ++t) {
    for (std::size_t l = 0; l < net.branch_rows.size(); ++l) {
      const Branch& br = c.branches[net.branch_rows[l]];
      double lim = *br.flow_limit;
      double slack = tol * std::max(1.0, lim);
      int li = static_cast<int>(l);
      if (flows[t][l] > lim + slack && !m.has_line_row(li, t, +1)) {
        add_line_row(m, c, net, li, t, +1);
        added = true;
      }
      if (flows[t][l] < -lim - slack && !m.has_line_row(li, t, -1)) {
        add_line_row(m, c, net, li, t, -1);
        added = true;
      }
    }
  }
  return added;
}

}  // namespace detail

struct ScucResult {
  DayStatus status = DayStatus::failed_to_converge;
  CommitmentSchedule schedule;
  double objective = 0.0;
};

// Day-ahead unit commitment for one day (optionally a shorter leading block
// of hours). Line limits enter lazily: solve, check implied flows, add
// violated limit rows, repeat.
inline ScucResult solve_scuc(const GridCase& c, const NetworkModel& net, int day,
                             const MarketOptions& opts = {},
                             const std::vector<unsigned char>* u_prev = nullptr,
                             const std::vector<double>* p_prev = nullptr,
                             int hours = 24) {
  if (day < 0 || day >= static_cast<int>(c.days()) || hours < 1 || hours > 24) {
    throw Error(ErrorKind::invariant, "day " + std::to_string(day) + " outside horizon");
  }
  detail::DayModel m = detail::build_day_model(c, day, hours, nullptr, u_prev, p_prev);
  MbpOptions mo;
  mo.gap = opts.mbp_gap;
  mo.node_cap = opts.node_cap;
  mo.lp = opts.lp;

  ScucResult out;
  SimplexBasis round_basis;
  for (int round = 0; round <= opts.lazy_rounds; ++round) {
    MixedBinaryProgram mbp{m.lp, m.binaries};
    MbpSolution sol = solve_mbp(mbp, mo, round_basis.empty() ? nullptr : &round_basis);
    if (sol.status == MbpStatus::infeasible) {
      out.status = DayStatus::infeasible;
      return out;
    }
    if (sol.status != MbpStatus::optimal) {
      out.status = DayStatus::failed_to_converge;
      return out;
    }
    auto flows = detail::model_flows(m, c, net, sol.x);
    if (!detail::add_violated_line_rows(m, c, net, flows, opts.flow_tol)) {
      out.status = DayStatus::optimal;
      out.objective = sol.objective;
      out.schedule.on.assign(c.generators.size(),
                             std::vector<unsigned char>(hours, 1));
      for (std::size_t g = 0; g < c.generators.size(); ++g) {
        for (int t = 0; t < hours; ++t) {
          int u = m.u_var[g][t];
          if (u >= 0) out.schedule.on[g][t] = sol.x[u] > 0.5 ? 1 : 0;
        }
      }
      return out;
    }
    round_basis = std::move(sol.incumbent_basis);
  }
  out.status = DayStatus::failed_to_converge;
  return out;
}

// Real-time dispatch for one day under a fixed commitment; the 24 hours form
// one LP coupled by ramp rows, and LMPs come from the balance and line duals:
// lmp[n] = lambda + sum_l ptdf[l][n] * (mu_lower[l] - mu_upper[l])
inline DispatchResult solve_sced(const GridCase& c, const NetworkModel& net, int day,
                                 const CommitmentSchedule& schedule,
                                 const MarketOptions& opts = {},
                                 const std::vector<unsigned char>* u_prev = nullptr,
                                 const std::vector<double>* p_prev = nullptr,
                                 int hours = 24) {
  if (day < 0 || day >= static_cast<int>(c.days()) || hours < 1 || hours > 24) {
    throw Error(ErrorKind::invariant, "day " + std::to_string(day) + " outside horizon");
  }
  if (schedule.on.size() != c.generators.size()) {
    throw Error(ErrorKind::invariant, "schedule shape does not match the case");
  }
  detail::DayModel m = detail::build_day_model(c, day, hours, &schedule, u_prev, p_prev);

  DispatchResult out;
  LpSolution sol;
  SimplexBasis basis;
  bool clean = false;
  for (int round = 0; round <= opts.lazy_rounds; ++round) {
    sol = solve_lp_warm(m.lp, basis.empty() ? nullptr : &basis, &basis, opts.lp);
    if (sol.status == LpStatus::infeasible) {
      out.status = DayStatus::infeasible;
      return out;
    }
    if (sol.status != LpStatus::optimal) {
      out.status = DayStatus::failed_to_converge;
      return out;
    }
    auto flows = detail::model_flows(m, c, net, sol.x);
    if (!detail::add_violated_line_rows(m, c, net, flows, opts.flow_tol)) {
      out.flow = std::move(flows);
      clean = true;
      break;
    }
  }
  if (!clean) {
    out.status = DayStatus::failed_to_converge;
    return out;
  }

  const int T = hours;
  const int G = static_cast<int>(c.generators.size());
  const int W = static_cast<int>(c.renewables.size());
  const int L = static_cast<int>(net.branch_rows.size());
  const int N = static_cast<int>(c.buses.size());

  out.status = DayStatus::optimal;
  out.objective = sol.objective + m.fixed_cost;
  out.generation.assign(T, std::vector<double>(G, 0.0));
  out.renewable.assign(T, std::vector<double>(W, 0.0));
  out.system_lambda.assign(T, 0.0);
  out.lmp.assign(T, std::vector<double>(N, 0.0));
  out.mu_upper.assign(T, std::vector<double>(L, 0.0));
  out.mu_lower.assign(T, std::vector<double>(L, 0.0));

  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      const detail::PExpr& p = m.power[g][t];
      double v = p.constant;
      for (auto [idx, coef] : p.terms) v += coef * sol.x[idx];
      out.generation[t][g] = v;
    }
    for (int w = 0; w < W; ++w) {
      if (m.ren_var[w][t] >= 0) out.renewable[t][w] = sol.x[m.ren_var[w][t]];
    }
    out.system_lambda[t] = sol.duals[m.balance_row[t]];
  }
  for (const auto& lr : m.line_rows) {
    double y = sol.duals[lr.row];
    if (lr.dir > 0) {
      out.mu_upper[lr.hour][lr.branch_row] = std::max(0.0, -y);
    } else {
      out.mu_lower[lr.hour][lr.branch_row] = std::max(0.0, y);
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int n = 0; n < N; ++n) {
      double congestion = 0.0;
      for (int l = 0; l < L; ++l) {
        double mu = out.mu_lower[t][l] - out.mu_upper[t][l];
        if (mu != 0.0) congestion += net.ptdf(l, n) * mu;
      }
      out.lmp[t][n] = out.system_lambda[t] + congestion;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Horizon price record
// ---------------------------------------------------------------------------
struct PriceRecord {
  std::vector<int> bus_ids;
  int first_day = 0;
  std::vector<DayStatus> day_status;
  std::vector<std::vector<double>> lmp;  // [local interval][bus], NaN off-optimal days
  std::string case_hash;
  std::string scenario;
  std::uint64_t seed = 0;

  int num_days() const { return static_cast<int>(day_status.size()); }
  int num_intervals() const { return num_days() * 24; }
  bool interval_feasible(int local_t) const {
    return day_status[local_t / 24] == DayStatus::optimal;
  }
  int absolute_interval(int local_t) const { return first_day * 24 + local_t; }
};

struct DayOutcome {
  DayStatus status = DayStatus::failed_to_converge;
  double objective = 0.0;
  CommitmentSchedule schedule;
  DispatchResult dispatch;
};

struct HorizonResult {
  PriceRecord record;
  std::vector<DayOutcome> days;
};

// SCUC then SCED per day over [first_day, end_day). Ramp and commitment
// state chain day to day; a non-optimal day resets the chain (cold start).
inline HorizonResult run_horizon(const GridCase& c, int first_day, int end_day,
                                 const MarketOptions& opts = {},
                                 const std::string& scenario_label = {},
                                 std::uint64_t seed = 0) {
  if (first_day < 0 || end_day > static_cast<int>(c.days()) || first_day >= end_day) {
    throw Error(ErrorKind::invariant,
                "day range [" + std::to_string(first_day) + ", " + std::to_string(end_day) +
                    ") outside horizon of " + std::to_string(c.days()) + " days");
  }
  NetworkModel net = build_network(c, opts.reference_bus);

  HorizonResult out;
  out.record.bus_ids = net.bus_ids;
  out.record.first_day = first_day;
  out.record.case_hash = case_hash(c);
  out.record.scenario = scenario_label;
  out.record.seed = seed;

  std::vector<unsigned char> u_prev;
  std::vector<double> p_prev;
  bool have_prev = false;

  for (int day = first_day; day < end_day; ++day) {
    DayOutcome oc;
    ScucResult uc = solve_scuc(c, net, day, opts, have_prev ? &u_prev : nullptr,
                               have_prev ? &p_prev : nullptr);
    oc.status = uc.status;
    if (uc.status == DayStatus::optimal) {
      oc.schedule = uc.schedule;
      oc.dispatch = solve_sced(c, net, day, uc.schedule, opts,
                               have_prev ? &u_prev : nullptr,
                               have_prev ? &p_prev : nullptr);
      oc.status = oc.dispatch.status;
      oc.objective = oc.dispatch.objective;
    }

    out.record.day_status.push_back(oc.status);
    if (oc.status == DayStatus::optimal) {
      for (int t = 0; t < 24; ++t) out.record.lmp.push_back(oc.dispatch.lmp[t]);
      u_prev.assign(c.generators.size(), 1);
      p_prev.assign(c.generators.size(), 0.0);
      for (std::size_t g = 0; g < c.generators.size(); ++g) {
        u_prev[g] = oc.schedule.on[g][23];
        p_prev[g] = oc.dispatch.generation[23][g];
      }
      have_prev = true;
    } else {
      std::vector<double> nan_row(net.bus_ids.size(),
                                  std::numeric_limits<double>::quiet_NaN());
      for (int t = 0; t < 24; ++t) out.record.lmp.push_back(nan_row);
      have_prev = false;
    }
    out.days.push_back(std::move(oc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PriceRecord export: long CSV of feasible intervals plus a JSON sidecar with
// statuses and metadata
// ---------------------------------------------------------------------------
inline std::string serialize_price_csv(const PriceRecord& r) {
  std::string out = "interval,bus_id,lmp\n";
  for (int t = 0; t < r.num_intervals(); ++t) {
    if (!r.interval_feasible(t)) continue;  // absent, not zero
    for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
      out += std::to_string(r.absolute_interval(t));
      out += ",";
      out += std::to_string(r.bus_ids[b]);
      out += ",";
      out += fmt_double(r.lmp[t][b]);
      out += "\n";
    }
  }
  return out;
}

inline std::string serialize_price_sidecar(const PriceRecord& r) {
  json doc;
  doc["first_day"] = r.first_day;
  doc["bus_ids"] = r.bus_ids;
  json statuses = json::array();
  for (DayStatus s : r.day_status) statuses.push_back(to_string(s));
  doc["day_status"] = std::move(statuses);
  doc["case_hash"] = r.case_hash;
  doc["scenario"] = r.scenario;
  doc["seed"] = r.seed;
  return doc.dump();
}

inline PriceRecord load_price_record(std::string_view csv_text,
                                     std::string_view sidecar_text) {
  PriceRecord r;
  json doc;
  try {
    doc = json::parse(sidecar_text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of_offset(sidecar_text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::syntax, e.what(), "price sidecar", line, col);
  }
  r.first_day = doc.at("first_day").get<int>();
  r.bus_ids = doc.at("bus_ids").get<std::vector<int>>();
  for (const auto& s : doc.at("day_status")) {
    r.day_status.push_back(day_status_from_string(s.get<std::string>()));
  }
  r.case_hash = doc.at("case_hash").get<std::string>();
  r.scenario = doc.at("scenario").get<std::string>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.lmp.assign(r.num_intervals(),
               std::vector<double>(r.bus_ids.size(),
                                   std::numeric_limits<double>::quiet_NaN()));

  std::map<int, int> bus_col;
  for (std::size_t b = 0; b < r.bus_ids.size(); ++b) {
    bus_col[r.bus_ids[b]] = static_cast<int>(b);
  }
  std::size_t start = 0;
  int line_no = 0;
  while (start < csv_text.size()) {
    std::size_t end = csv_text.find('\n', start);
    if (end == std::string_view::npos) end = csv_text.size();
    std::string_view line = csv_text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty() || line_no == 1) continue;  // header
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw Error(ErrorKind::syntax, "malformed price row",
                  "price CSV line " + std::to_string(line_no));
    }
    std::string where = "price CSV line " + std::to_string(line_no);
    int interval = static_cast<int>(parse_double(line.substr(0, c1), where));
    int bus = static_cast<int>(parse_double(line.substr(c1 + 1, c2 - c1 - 1), where));
    double lmp = parse_double(line.substr(c2 + 1), where);
    int local = interval - r.first_day * 24;
    if (local < 0 || local >= r.num_intervals()) {
      throw Error(ErrorKind::invariant, "interval " + std::to_string(interval) +
                      " outside the recorded horizon", where);
    }
    auto it = bus_col.find(bus);
    if (it == bus_col.end()) {
      throw Error(ErrorKind::reference, "bus " + std::to_string(bus) +
                      " not in the record's bus set", where);
    }
    r.lmp[local][it->second] = lmp;
  }
  return r;
}

}  // namespace gridmkt
