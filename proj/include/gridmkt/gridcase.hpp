#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridmkt/common.hpp"

namespace gridmkt {

struct Bus {
  int id = 0;
  std::optional<std::string> county;

  friend bool operator==(const Bus&, const Bus&) = default;
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0;                  // per-unit, > 0 when in service
  std::optional<double> flow_limit;        // MW; nullopt = unmonitored
  bool in_service = true;

  friend bool operator==(const Branch&, const Branch&) = default;
};

// Convex piecewise-linear energy cost above p_min. `breakpoint_mw` is the
// right edge of each segment; the last breakpoint equals p_max.
struct CostSegment {
  double breakpoint_mw = 0.0;
  double slope = 0.0;  // $/MWh

  friend bool operator==(const CostSegment&, const CostSegment&) = default;
};

struct CostCurve {
  std::vector<CostSegment> segments;

  friend bool operator==(const CostCurve&, const CostCurve&) = default;

  // segment widths given the curve starts at p_min
  std::vector<double> widths(double p_min) const {
    std::vector<double> w;
    w.reserve(segments.size());
    double prev = p_min;
    for (const auto& s : segments) {
      w.push_back(s.breakpoint_mw - prev);
      prev = s.breakpoint_mw;
    }
    return w;
  }

  // energy cost of producing `p` MW, measured from p_min
  double cost_above_min(double p_min, double p) const {
    double cost = 0.0;
    double prev = p_min;
    for (const auto& s : segments) {
      double take = std::clamp(p, prev, s.breakpoint_mw) - prev;
      if (take > 0) cost += take * s.slope;
      prev = s.breakpoint_mw;
    }
    return cost;
  }
};

struct Generator {
  int bus = 0;
  double p_min = 0.0;        // MW
  double p_max = 0.0;        // MW
  double ramp_limit = kInf;  // MW/h; infinity = unlimited
  double startup_cost = 0.0; // $
  double no_load_cost = 0.0; // $/h while committed
  CostCurve cost_curve;

  friend bool operator==(const Generator&, const Generator&) = default;

  // commitment is a real decision only when the unit has a production floor
  // or fixed costs; otherwise u = 1 is optimal w.l.o.g.
  bool needs_commitment() const {
    return p_min > 0.0 || no_load_cost > 0.0 || startup_cost > 0.0;
  }
};

// Per-bus hourly series; all series share one length, divisible by 24.
struct DemandProfile {
  std::map<int, std::vector<double>> series;  // bus id -> MW per interval

  friend bool operator==(const DemandProfile&, const DemandProfile&) = default;

  std::size_t intervals() const {
    return series.empty() ? 0 : series.begin()->second.size();
  }
};

struct RenewableSite {
  int bus = 0;
  std::vector<double> series;  // MW available per interval (dispatchable down)

  friend bool operator==(const RenewableSite&, const RenewableSite&) = default;
};

struct GridCase {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  DemandProfile demand;
  std::vector<RenewableSite> renewables;

  friend bool operator==(const GridCase&, const GridCase&) = default;

  std::size_t intervals() const { return demand.intervals(); }
  std::size_t days() const { return intervals() / 24; }

  int bus_index(int bus_id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
      if (buses[i].id == bus_id) return static_cast<int>(i);
    }
    return -1;
  }

  std::map<int, int> bus_positions() const {
    std::map<int, int> pos;
    for (std::size_t i = 0; i < buses.size(); ++i) {
      pos[buses[i].id] = static_cast<int>(i);
    }
    return pos;
  }

  double total_demand(std::size_t t) const {
    double total = 0.0;
    for (const auto& [bus, series] : demand.series) total += series[t];
    return total;
  }
};

namespace detail {

inline void check_cost_curve(const Generator& g, const std::string& where) {
  const auto& segs = g.cost_curve.segments;
  if (segs.empty()) {
    throw Error(ErrorKind::invariant, "cost curve has no segments", where);
  }
  double prev_bp = g.p_min;
  double prev_slope = -kInf;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (!(segs[k].breakpoint_mw > prev_bp) &&
        !(k == 0 && segs[k].breakpoint_mw == g.p_min && segs.size() == 1)) {
      // zero-width single segment is tolerated only for p_min == p_max
      if (!(g.p_min == g.p_max && segs.size() == 1)) {
        throw Error(ErrorKind::invariant,
                    "cost curve breakpoints must be strictly increasing", where);
      }
    }
    if (!(segs[k].slope > prev_slope)) {
      throw Error(ErrorKind::invariant,
                  "cost curve is non-convex (slopes must be strictly nondecreasing)",
                  where);
    }
    prev_bp = segs[k].breakpoint_mw;
    prev_slope = segs[k].slope;
  }
  if (std::abs(segs.back().breakpoint_mw - g.p_max) > 1e-9 * (1.0 + std::abs(g.p_max))) {
    throw Error(ErrorKind::invariant,
                "final cost-curve breakpoint must equal p_max", where);
  }
}

}  // namespace detail

// Full type-invariant validation. Throws Error; never returns a partially
// checked case.
inline void validate_case(const GridCase& c) {
  if (!(c.base_mva > 0)) {
    throw Error(ErrorKind::invariant, "base_mva must be > 0");
  }
  if (c.buses.empty()) {
    throw Error(ErrorKind::invariant, "case has no buses");
  }
  std::set<int> bus_ids;
  for (const auto& b : c.buses) {
    if (!bus_ids.insert(b.id).second) {
      throw Error(ErrorKind::invariant,
                  "duplicate bus id " + std::to_string(b.id));
    }
  }

  for (std::size_t i = 0; i < c.branches.size(); ++i) {
    const auto& br = c.branches[i];
    std::string where = "branches[" + std::to_string(i) + "]";
    if (!bus_ids.count(br.from_bus)) {
      throw Error(ErrorKind::reference,
                  "branch references unknown bus " + std::to_string(br.from_bus), where);
    }
    if (!bus_ids.count(br.to_bus)) {
      throw Error(ErrorKind::reference,
                  "branch references unknown bus " + std::to_string(br.to_bus), where);
    }
    if (br.in_service && !(br.reactance > 0)) {
      throw Error(ErrorKind::invariant,
                  "zero reactance on in-service branch", where);
    }
    if (br.flow_limit && !(*br.flow_limit > 0)) {
      throw Error(ErrorKind::invariant, "flow_limit must be > 0 or null", where);
    }
  }

  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    const auto& g = c.generators[i];
    std::string where = "generators[" + std::to_string(i) + "]";
    if (!bus_ids.count(g.bus)) {
      throw Error(ErrorKind::reference,
                  "generator references unknown bus " + std::to_string(g.bus), where);
    }
    if (!(g.p_min >= 0)) throw Error(ErrorKind::invariant, "p_min must be >= 0", where);
    if (!(g.p_max >= g.p_min)) {
      throw Error(ErrorKind::invariant, "p_max must be >= p_min", where);
    }
    if (!(g.ramp_limit > 0)) {
      throw Error(ErrorKind::invariant, "ramp_limit must be > 0", where);
    }
    if (!(g.startup_cost >= 0)) {
      throw Error(ErrorKind::invariant, "startup_cost must be >= 0", where);
    }
    if (!(g.no_load_cost >= 0)) {
      throw Error(ErrorKind::invariant, "no_load_cost must be >= 0", where);
    }
    detail::check_cost_curve(g, where);
  }

  // connectivity of the in-service network (single island)
  {
    std::map<int, std::vector<int>> adj;
    for (const auto& br : c.branches) {
      if (!br.in_service) continue;
      adj[br.from_bus].push_back(br.to_bus);
      adj[br.to_bus].push_back(br.from_bus);
    }
    std::set<int> seen;
    std::vector<int> stack{c.buses.front().id};
    seen.insert(c.buses.front().id);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      auto it = adj.find(v);
      if (it == adj.end()) continue;
      for (int w : it->second) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    if (seen.size() != bus_ids.size()) {
      for (int id : bus_ids) {
        if (!seen.count(id)) {
          throw Error(ErrorKind::island,
                      "bus " + std::to_string(id) +
                          " is not connected to the in-service network");
        }
      }
    }
  }

  // profiles
  std::size_t T = 0;
  bool have_T = false;
  for (const auto& [bus, series] : c.demand.series) {
    if (!bus_ids.count(bus)) {
      throw Error(ErrorKind::reference,
                  "demand series references unknown bus " + std::to_string(bus));
    }
    if (!have_T) {
      T = series.size();
      have_T = true;
    } else if (series.size() != T) {
      throw Error(ErrorKind::invariant,
                  "demand series lengths differ (bus " + std::to_string(bus) + ")");
    }
    for (std::size_t t = 0; t < series.size(); ++t) {
      if (!(series[t] >= 0) || std::isnan(series[t])) {
        throw Error(ErrorKind::invariant,
                    "negative demand at bus " + std::to_string(bus) +
                        " interval " + std::to_string(t));
      }
    }
  }
  for (const auto& r : c.renewables) {
    if (!bus_ids.count(r.bus)) {
      throw Error(ErrorKind::reference,
                  "renewable series references unknown bus " + std::to_string(r.bus));
    }
    if (!have_T) {
      T = r.series.size();
      have_T = true;
    } else if (r.series.size() != T) {
      throw Error(ErrorKind::invariant,
                  "renewable series length differs (bus " + std::to_string(r.bus) + ")");
    }
    for (double v : r.series) {
      if (!(v >= 0) || std::isnan(v)) {
        throw Error(ErrorKind::invariant,
                    "negative renewable output at bus " + std::to_string(r.bus));
      }
    }
  }
  if (have_T && T % 24 != 0) {
    throw Error(ErrorKind::invariant,
                "profile length " + std::to_string(T) + " is not divisible by 24");
  }
}

}  // namespace gridmkt
