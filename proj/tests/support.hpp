#pragma once

// Shared builders and oracles for the test suite. Everything here is
// deterministic given the SplitMix64 seed handed in.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <gridmkt/case_io.hpp>
#include <gridmkt/economics.hpp>
#include <gridmkt/gridcase.hpp>
#include <gridmkt/lp.hpp>

namespace testsup {

using namespace gridmkt;

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool near_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * (1.0 + std::abs(b));
}

// convenience generator builder: segs are (breakpoint, slope) pairs
inline Generator make_gen(int bus, double p_min, double p_max,
                          std::vector<std::pair<double, double>> segs,
                          double ramp = kInf, double startup = 0.0,
                          double no_load = 0.0) {
  Generator g;
  g.bus = bus;
  g.p_min = p_min;
  g.p_max = p_max;
  g.ramp_limit = ramp;
  g.startup_cost = startup;
  g.no_load_cost = no_load;
  for (auto [bp, slope] : segs) g.cost_curve.segments.push_back({bp, slope});
  return g;
}

// single-segment helper: the whole [p_min, p_max] range at one slope
inline Generator make_gen1(int bus, double p_min, double p_max, double slope,
                           double ramp = kInf, double startup = 0.0,
                           double no_load = 0.0) {
  return make_gen(bus, p_min, p_max, {{p_max, slope}}, ramp, startup, no_load);
}

// ---------------------------------------------------------------------------
// Random valid grid case, exercising optional-field variety (null limits,
// out-of-service branches, counties, renewables, multi-day profiles).
// ---------------------------------------------------------------------------
inline GridCase random_grid_case(SplitMix64& rng) {
  GridCase c;
  c.base_mva = 100.0;
  const int n = 2 + static_cast<int>(rng.below(7));
  static const char* county_pool[] = {"Webb", "Duval", "Harris", "Travis"};

  int id = 1;
  for (int i = 0; i < n; ++i) {
    Bus b;
    b.id = id;
    if (rng.uniform() < 0.4) {
      b.county = county_pool[rng.below(4)];
    }
    c.buses.push_back(b);
    id += 1 + static_cast<int>(rng.below(3));
  }

  auto random_branch = [&](int from, int to, bool in_service) {
    Branch br;
    br.from_bus = from;
    br.to_bus = to;
    br.reactance = rng.uniform(0.01, 0.5);
    if (rng.uniform() < 0.6) br.flow_limit = rng.uniform(20.0, 500.0);
    br.in_service = in_service;
    return br;
  };

  // spanning tree over the in-service network, then a few extras
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.below(i));
    c.branches.push_back(random_branch(c.buses[j].id, c.buses[i].id, true));
  }
  int extras = static_cast<int>(rng.below(3));
  for (int e = 0; e < extras && n >= 2; ++e) {
    int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n));
    if (i == j) continue;
    c.branches.push_back(
        random_branch(c.buses[i].id, c.buses[j].id, rng.uniform() < 0.7));
  }

  int gens = 1 + static_cast<int>(rng.below(4));
  for (int g = 0; g < gens; ++g) {
    int bus = c.buses[rng.below(n)].id;
    double p_min = rng.uniform() < 0.5 ? 0.0 : rng.uniform(5.0, 20.0);
    double p_max = p_min + rng.uniform(10.0, 100.0);
    int nsegs = 1 + static_cast<int>(rng.below(3));
    std::vector<std::pair<double, double>> segs;
    double slope = rng.uniform(5.0, 50.0);
    double prev_bp = p_min;
    for (int k = 0; k < nsegs; ++k) {
      double bp = k == nsegs - 1
                      ? p_max
                      : prev_bp + (p_max - prev_bp) * rng.uniform(0.2, 0.8);
      segs.push_back({bp, slope});
      prev_bp = bp;
      slope += rng.uniform(0.1, 10.0);
    }
    double ramp = rng.uniform() < 0.5 ? kInf : rng.uniform(p_min + 1.0, p_max + 50.0);
    double startup = rng.uniform() < 0.5 ? 0.0 : rng.uniform(10.0, 500.0);
    double no_load = rng.uniform() < 0.5 ? 0.0 : rng.uniform(1.0, 50.0);
    c.generators.push_back(make_gen(bus, p_min, p_max, segs, ramp, startup, no_load));
  }

  int days = 1 + static_cast<int>(rng.below(2));
  for (const auto& b : c.buses) {
    std::vector<double> series(24 * days);
    for (double& v : series) v = rng.uniform(0.0, 50.0);
    c.demand.series[b.id] = std::move(series);
  }
  int sites = static_cast<int>(rng.below(3));
  for (int s = 0; s < sites; ++s) {
    RenewableSite r;
    r.bus = c.buses[rng.below(n)].id;
    r.series.resize(24 * days);
    for (double& v : r.series) v = rng.uniform(0.0, 30.0);
    c.renewables.push_back(std::move(r));
  }
  validate_case(c);
  return c;
}

// ---------------------------------------------------------------------------
// Random single-bus unit-commitment instance. One expensive always-on unit
// covers any demand level, so every instance is feasible; cheap commitment
// units with floors, startup, and no-load costs make the binary choice real.
// Ramps are unlimited, so hours couple only through startup costs and the
// enumeration oracle below is exact.
// ---------------------------------------------------------------------------
inline GridCase random_uc_case(SplitMix64& rng, int max_uc_gens) {
  GridCase c;
  c.base_mva = 100.0;
  c.buses.push_back({1, {}});

  double peaker_cap = rng.uniform(150.0, 250.0);
  c.generators.push_back(make_gen1(1, 0.0, peaker_cap, rng.uniform(60.0, 120.0)));

  int uc_gens = 1 + static_cast<int>(rng.below(max_uc_gens));
  for (int g = 0; g < uc_gens; ++g) {
    double p_max = rng.uniform(40.0, 120.0);
    double p_min = rng.uniform(0.1, 0.7) * p_max;
    int nsegs = 1 + static_cast<int>(rng.below(3));
    std::vector<std::pair<double, double>> segs;
    double slope = rng.uniform(5.0, 25.0);
    double prev_bp = p_min;
    for (int k = 0; k < nsegs; ++k) {
      double bp = k == nsegs - 1
                      ? p_max
                      : prev_bp + (p_max - prev_bp) * rng.uniform(0.3, 0.7);
      segs.push_back({bp, slope});
      prev_bp = bp;
      slope += rng.uniform(0.5, 8.0);
    }
    c.generators.push_back(make_gen(1, p_min, p_max, segs, kInf,
                                    rng.uniform(50.0, 2000.0),
                                    rng.uniform(0.0, 200.0)));
  }

  std::vector<double> series(24, 0.0);
  for (double& v : series) v = rng.uniform(0.15, 0.9) * peaker_cap;
  c.demand.series[1] = std::move(series);
  validate_case(c);
  return c;
}

// Exhaustive commitment enumeration for single-bus cases with non-binding
// ramps: every on/off pattern of the commitment units is costed per hour by
// merit-order dispatch, and patterns chain across hours through startup
// costs. Organized as a pass over (hour, pattern) states, this visits the
// cost of every commitment assignment of the day.
inline double scuc_enumeration_oracle(const GridCase& c, int hours) {
  std::vector<int> uc, always;
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    (c.generators[g].needs_commitment() ? uc : always).push_back(static_cast<int>(g));
  }
  const int P = 1 << uc.size();

  auto stage_cost = [&](int t, int pat) -> double {
    double base = 0.0, fixed = 0.0;
    std::vector<std::pair<double, double>> segs;  // slope, width
    auto add_gen = [&](int g) {
      const Generator& gen = c.generators[g];
      auto widths = gen.cost_curve.widths(gen.p_min);
      for (std::size_t k = 0; k < widths.size(); ++k) {
        segs.push_back({gen.cost_curve.segments[k].slope, widths[k]});
      }
    };
    for (int g : always) add_gen(g);
    for (std::size_t i = 0; i < uc.size(); ++i) {
      if (pat & (1 << i)) {
        const Generator& gen = c.generators[uc[i]];
        base += gen.p_min;
        fixed += gen.no_load_cost;
        add_gen(uc[i]);
      }
    }
    double rem = c.total_demand(t) - base;
    if (rem < -1e-9) return kInf;
    std::sort(segs.begin(), segs.end());
    double cost = fixed;
    for (auto [slope, width] : segs) {
      double take = std::min(rem, width);
      if (take > 0) cost += take * slope;
      rem -= take;
    }
    if (rem > 1e-9) return kInf;
    return cost;
  };

  auto transition_cost = [&](int from, int to) {
    double cost = 0.0;
    for (std::size_t i = 0; i < uc.size(); ++i) {
      if ((to & (1 << i)) && !(from & (1 << i))) {
        cost += c.generators[uc[i]].startup_cost;
      }
    }
    return cost;
  };

  std::vector<double> dist(P, kInf);
  dist[0] = 0.0;  // cold start: everything off before hour 0
  for (int t = 0; t < hours; ++t) {
    std::vector<double> next(P, kInf);
    for (int p = 0; p < P; ++p) {
      double sc = stage_cost(t, p);
      if (sc == kInf) continue;
      for (int q = 0; q < P; ++q) {
        if (dist[q] == kInf) continue;
        double v = dist[q] + transition_cost(q, p) + sc;
        if (v < next[p]) next[p] = v;
      }
    }
    dist = std::move(next);
  }
  return *std::min_element(dist.begin(), dist.end());
}

// ---------------------------------------------------------------------------
// Random feasible bounded LP: rows are built around a known interior point,
// so the instance is always feasible, and finite bounds keep it bounded.
// ---------------------------------------------------------------------------
inline LinearProgram random_lp(SplitMix64& rng, bool inequality_only = false) {
  LinearProgram lp;
  const int nvars = 2 + static_cast<int>(rng.below(5));
  std::vector<double> x0(nvars);
  for (int j = 0; j < nvars; ++j) {
    double hi = rng.uniform(1.0, 10.0);
    lp.add_variable(0.0, hi, rng.uniform(-10.0, 10.0));
    x0[j] = rng.uniform(0.05, 0.95) * hi;
  }
  const int nrows = 1 + static_cast<int>(rng.below(6));
  for (int i = 0; i < nrows; ++i) {
    std::vector<std::pair<int, double>> coeffs;
    double ax = 0.0;
    for (int j = 0; j < nvars; ++j) {
      if (rng.uniform() < 0.7) {
        double a = rng.uniform(-5.0, 5.0);
        coeffs.push_back({j, a});
        ax += a * x0[j];
      }
    }
    if (coeffs.empty()) {
      coeffs.push_back({0, 1.0});
      ax = x0[0];
    }
    double pick = rng.uniform();
    if (inequality_only) pick *= 0.8;
    if (pick < 0.4) {
      lp.add_row(RowSense::le, ax + rng.uniform(0.1, 5.0), std::move(coeffs));
    } else if (pick < 0.8) {
      lp.add_row(RowSense::ge, ax - rng.uniform(0.1, 5.0), std::move(coeffs));
    } else {
      lp.add_row(RowSense::eq, ax, std::move(coeffs));
    }
  }
  return lp;
}

// ---------------------------------------------------------------------------
// Random portfolio instances for the vertex-equivalence property.
// ---------------------------------------------------------------------------
struct PortfolioInstance {
  std::vector<DrProgram> programs;
  MiningEconomics econ;
  double budget_mw = 0.0;
  std::size_t horizon = 0;
};

inline PortfolioInstance random_portfolio(SplitMix64& rng) {
  PortfolioInstance inst;
  inst.horizon = 5 + rng.below(60);
  for (std::size_t t = 0; t < inst.horizon; ++t) {
    inst.econ.btc_price.push_back(rng.uniform(1e4, 4e4));
    inst.econ.difficulty.push_back(rng.uniform(100.0, 200.0));
    inst.econ.elec_price.push_back(rng.uniform(0.0, 60.0));
  }
  int n = 1 + static_cast<int>(rng.below(5));
  for (int i = 0; i < n; ++i) {
    DrProgram p;
    p.name = "prog" + std::to_string(i);
    p.kind = ProgramKind::reserve_record;
    for (std::size_t t = 0; t < inst.horizon; ++t) {
      p.intervals.push_back(static_cast<int>(t));
      p.revenue.push_back(rng.uniform(0.0, 120.0));
      p.deployment.push_back(rng.uniform(0.0, 1.0));
    }
    inst.programs.push_back(std::move(p));
  }
  inst.budget_mw = rng.uniform(10.0, 500.0);
  return inst;
}

}  // namespace testsup
