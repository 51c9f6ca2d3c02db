// Emits the bundled demo system: a 30-bus, 7-county grid with two deliberate
// bottlenecks (the Liberty pocket feeder and the Zapata radial), a 61-day
// hourly demand horizon, mining economics, two reserve programs, and ready-made
// CLI configs. Everything is derived from a fixed seed so repeated runs
// produce identical files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "gridmkt/case_io.hpp"
#include "gridmkt/economics.hpp"
#include "gridmkt/scenario.hpp"

namespace fs = std::filesystem;
using namespace gridmkt;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kDays = 61;

// hour-of-day demand shape, peaking in the late afternoon
const double kDiurnal[24] = {0.62, 0.58, 0.56, 0.55, 0.56, 0.60, 0.68, 0.76,
                             0.82, 0.86, 0.88, 0.90, 0.92, 0.95, 0.98, 1.00,
                             1.00, 0.97, 0.93, 0.88, 0.82, 0.76, 0.70, 0.65};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::fprintf(stderr, "demogen: cannot write %s\n", path.string().c_str());
    std::exit(1);
  }
}

Branch line(int from, int to, double x, double limit, bool in_service = true) {
  Branch b;
  b.from_bus = from;
  b.to_bus = to;
  b.reactance = x;
  if (limit > 0) b.flow_limit = limit;
  b.in_service = in_service;
  return b;
}

// Mirrors the matrix-format import recipe so the JSON and .m encodings of the
// demo parse to identical generator numbers.
Generator gen(int bus, double p_min, double p_max, std::vector<double> coeffs,
              double ramp, double startup) {
  Generator g;
  g.bus = bus;
  g.p_min = p_min;
  g.p_max = p_max;
  g.ramp_limit = ramp > 0 ? ramp : kInf;
  g.startup_cost = startup;
  g.no_load_cost = poly_eval(coeffs, p_min);
  g.cost_curve = poly_to_curve(coeffs, p_min, p_max, 4);
  return g;
}

struct GenCost {
  std::vector<double> coeffs;
  double startup = 0.0;
};

std::string mcase_text(const GridCase& c, const std::vector<GenCost>& costs,
                       const std::map<int, double>& pd) {
  std::string out;
  out += "function mpc = demo30\n";
  out += "mpc.version = '2';\n";
  out += "mpc.baseMVA = " + fmt_double(c.base_mva) + ";\n";

  out += "mpc.bus = [\n";
  for (const auto& b : c.buses) {
    double d = pd.count(b.id) ? pd.at(b.id) : 0.0;
    out += "  " + std::to_string(b.id) + " 1 " + fmt_double(d) +
           " 0 0 0 1 1 0 135 1 1.1 0.9;\n";
  }
  out += "];\n";

  out += "mpc.branch = [\n";
  for (const auto& br : c.branches) {
    out += "  " + std::to_string(br.from_bus) + " " + std::to_string(br.to_bus) +
           " 0 " + fmt_double(br.reactance) + " 0 " +
           fmt_double(br.flow_limit ? *br.flow_limit : 0.0) + " 0 0 0 0 " +
           (br.in_service ? "1" : "0") + ";\n";
  }
  out += "];\n";

  out += "mpc.gen = [\n";
  for (const auto& g : c.generators) {
    double ramp_per_min = std::isinf(g.ramp_limit) ? 0.0 : g.ramp_limit / 60.0;
    out += "  " + std::to_string(g.bus) + " 0 0 0 0 1 100 1 " +
           fmt_double(g.p_max) + " " + fmt_double(g.p_min) +
           " 0 0 0 0 0 0 " + fmt_double(ramp_per_min) + ";\n";
  }
  out += "];\n";

  out += "mpc.gencost = [\n";
  std::size_t width = 0;
  for (const auto& gc : costs) width = std::max(width, gc.coeffs.size());
  for (const auto& gc : costs) {
    out += "  2 " + fmt_double(gc.startup) + " 0 " +
           std::to_string(gc.coeffs.size());
    for (double v : gc.coeffs) out += " " + fmt_double(v);
    for (std::size_t k = gc.coeffs.size(); k < width; ++k) out += " 0";
    out += ";\n";
  }
  out += "];\n";
  return out;
}

std::string config_text(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("demo");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "demogen: cannot create %s\n", out_dir.string().c_str());
    return 1;
  }

  GridCase c;
  c.base_mva = 100.0;

  const std::vector<std::pair<std::string, std::vector<int>>> counties = {
      {"Webb", {1, 2, 3, 4, 5, 6}},      {"Duval", {7, 8, 9, 10, 11, 12}},
      {"Harris", {13, 14, 15, 16, 17, 18}}, {"Travis", {19, 20, 21, 22}},
      {"Liberty", {23, 24, 25, 26}},     {"Starr", {27, 28, 29}},
      {"Zapata", {30}}};
  for (const auto& [name, ids] : counties) {
    for (int id : ids) {
      Bus b;
      b.id = id;
      b.county = name;
      c.buses.push_back(b);
    }
  }

  // Webb ring (generation pocket in the west)
  c.branches.push_back(line(1, 2, 0.04, 400));
  c.branches.push_back(line(2, 3, 0.05, 300));
  c.branches.push_back(line(3, 4, 0.05, 300));
  c.branches.push_back(line(4, 5, 0.04, 350));
  c.branches.push_back(line(5, 6, 0.05, 250));
  c.branches.push_back(line(6, 1, 0.04, 350));
  // Duval ring plus two Webb crossings
  c.branches.push_back(line(7, 8, 0.05, 250));
  c.branches.push_back(line(8, 9, 0.05, 250));
  c.branches.push_back(line(9, 10, 0.05, 250));
  c.branches.push_back(line(10, 11, 0.05, 250));
  c.branches.push_back(line(11, 12, 0.05, 250));
  c.branches.push_back(line(12, 7, 0.05, 250));
  c.branches.push_back(line(2, 8, 0.06, 300));
  c.branches.push_back(line(5, 11, 0.06, 300));
  // Harris chain (load center)
  c.branches.push_back(line(13, 14, 0.04, 300));
  c.branches.push_back(line(14, 15, 0.04, 300));
  c.branches.push_back(line(15, 16, 0.04, 300));
  c.branches.push_back(line(16, 17, 0.04, 300));
  c.branches.push_back(line(17, 18, 0.04, 300));
  // Travis loop hanging off Harris
  c.branches.push_back(line(18, 19, 0.05, 250));
  c.branches.push_back(line(19, 20, 0.05, 250));
  c.branches.push_back(line(20, 21, 0.05, 250));
  c.branches.push_back(line(21, 22, 0.05, 250));
  c.branches.push_back(line(13, 20, 0.07, 250));
  // east-west ties
  c.branches.push_back(line(5, 13, 0.05, 420));
  c.branches.push_back(line(4, 14, 0.05, 420));
  c.branches.push_back(line(12, 16, 0.06, 380));
  // spare Harris tie, normally open
  c.branches.push_back(line(13, 16, 0.05, 300, false));
  // Liberty pocket: one feeder rated 200 MW, so pocket imports cap out there
  c.branches.push_back(line(18, 23, 0.05, 200));
  c.branches.push_back(line(23, 24, 0.04, 200));
  c.branches.push_back(line(24, 25, 0.04, 200));
  c.branches.push_back(line(25, 26, 0.04, 200));
  // Starr spur with generous ratings
  c.branches.push_back(line(10, 27, 0.06, 260));
  c.branches.push_back(line(27, 28, 0.05, 200));
  c.branches.push_back(line(28, 29, 0.05, 200));
  // Zapata radial, the hosting-capacity bottleneck
  c.branches.push_back(line(8, 30, 0.10, 80));

  std::vector<GenCost> costs;
  auto add_gen = [&](int bus, double p_min, double p_max,
                     std::vector<double> coeffs, double ramp, double startup) {
    c.generators.push_back(gen(bus, p_min, p_max, coeffs, ramp, startup));
    costs.push_back({std::move(coeffs), startup});
  };
  add_gen(1, 120, 400, {0.008, 18, 0}, 240, 800);   // baseload coal
  add_gen(2, 100, 350, {0.01, 22, 0}, 180, 600);    // baseload gas
  add_gen(3, 0, 300, {0.012, 26, 0}, 0, 0);         // mid-merit gas
  add_gen(15, 80, 250, {0.015, 30, 0}, 150, 500);   // Harris steam unit
  add_gen(17, 0, 200, {0.02, 35, 0}, 0, 0);         // Harris peaker
  add_gen(24, 0, 150, {55, 0}, 0, 0);               // Liberty pocket peaker
  add_gen(27, 0, 250, {0.011, 24, 0}, 0, 0);        // Starr combined cycle
  add_gen(9, 30, 180, {0.01, 27, 0}, 150, 400);     // Duval cycling unit

  // peak demand per bus; bus 30 ramps up across the horizon instead
  const std::map<int, double> base = {
      {1, 40},  {2, 35},  {3, 30},  {4, 25},  {5, 28},  {6, 32},
      {7, 30},  {8, 28},  {9, 25},  {10, 22}, {11, 20}, {12, 26},
      {13, 55}, {14, 60}, {15, 48}, {16, 52}, {17, 45}, {18, 65},
      {19, 70}, {20, 62}, {21, 40}, {22, 38},
      {23, 28}, {24, 30}, {25, 22}, {26, 20},
      {27, 25}, {28, 22}, {29, 18}};

  // one day factor per day, shared by every bus so county shares stay fixed
  SplitMix64 day_rng = substream(kSeed, 1);
  std::vector<double> day_factor(kDays);
  for (int d = 0; d < kDays; ++d) {
    day_factor[d] = 0.94 + 0.06 * std::sin(6.2831853071795864769 * d / kDays) +
                    0.04 * day_rng.uniform();
  }

  for (const auto& [bus, peak] : base) {
    std::vector<double> series(static_cast<std::size_t>(kDays) * 24);
    for (int d = 0; d < kDays; ++d) {
      for (int h = 0; h < 24; ++h) {
        series[static_cast<std::size_t>(d) * 24 + h] =
            peak * day_factor[d] * kDiurnal[h];
      }
    }
    c.demand.series[bus] = std::move(series);
  }
  // Zapata grows linearly from 18 to 30 MW peak with no jitter, so the day a
  // given mining capacity first overloads the 80 MW radial is predictable
  {
    std::vector<double> series(static_cast<std::size_t>(kDays) * 24);
    for (int d = 0; d < kDays; ++d) {
      double peak = 18.0 + 12.0 * d / 60.0;
      for (int h = 0; h < 24; ++h) {
        series[static_cast<std::size_t>(d) * 24 + h] = peak * kDiurnal[h];
      }
    }
    c.demand.series[30] = std::move(series);
  }

  validate_case(c);
  write_file(out_dir / "case.json", serialize_case(c));
  write_file(out_dir / "profiles.csv", serialize_profile_csv(c.demand.series));

  std::map<int, double> pd;
  for (const auto& [bus, peak] : base) pd[bus] = peak;
  pd[30] = 18.0;
  write_file(out_dir / "case.m", mcase_text(c, costs, pd));

  // mining economics: a slow BTC random walk over a flat difficulty, with
  // electricity cost tracking the diurnal shape
  MiningEconomics econ;
  SplitMix64 btc_rng = substream(kSeed, 2);
  double btc = 25000.0;
  for (int d = 0; d < kDays; ++d) {
    for (int h = 0; h < 24; ++h) {
      econ.btc_price.push_back(btc);
      econ.difficulty.push_back(143.0);
      econ.elec_price.push_back(22.0 + 6.0 * kDiurnal[h]);
    }
    btc *= 1.0 + 0.004 * (2.0 * btc_rng.uniform() - 1.0);
  }
  write_file(out_dir / "economics.csv", serialize_economics_csv(econ));

  // responsive reserve: steady availability money, deployed six evenings
  {
    DrProgram p;
    p.name = "rrs";
    for (int t = 0; t < kDays * 24; ++t) {
      int d = t / 24, h = t % 24;
      bool deployed = (d == 10 || d == 25 || d == 40) && (h == 16 || h == 17);
      p.intervals.push_back(t);
      p.revenue.push_back(11.27);
      p.deployment.push_back(deployed ? 0.25 : 0.0);
    }
    write_file(out_dir / "rrs.csv", serialize_program_csv(p));
  }
  // emergency reserve: cheaper, deployed more often and more deeply
  {
    DrProgram p;
    p.name = "ers";
    for (int t = 0; t < kDays * 24; ++t) {
      int d = t / 24, h = t % 24;
      bool deployed = (d == 5 || d == 15 || d == 20 || d == 30 || d == 40 ||
                       d == 50) &&
                      (h == 14 || h == 15 || h == 16);
      p.intervals.push_back(t);
      p.revenue.push_back(6.03);
      p.deployment.push_back(deployed ? 0.5 : 0.0);
    }
    write_file(out_dir / "ers.csv", serialize_program_csv(p));
  }

  // capacity sweep over the three candidate siting areas
  {
    SweepSpec spec;
    spec.location_sets = {{"liberty", {23, 24, 25, 26}},
                          {"starr", {27, 28, 29}},
                          {"zapata", {30}}};
    spec.capacities_mw = {0, 30, 45, 52, 56, 60};
    spec.day_start = 0;
    spec.day_end = kDays;
    write_file(out_dir / "sweep.json", serialize_sweep_spec(spec));
  }

  // fixed 120 MW builds: inside the constrained pocket and on the open spur
  {
    MiningScenario s;
    s.label = "liberty_120";
    for (int bus : {23, 24, 25, 26}) s.facilities.push_back({bus, 30.0});
    write_file(out_dir / "scenario_liberty.json", serialize_scenario(s) + "\n");
  }
  {
    MiningScenario s;
    s.label = "starr_120";
    for (int bus : {27, 28, 29}) s.facilities.push_back({bus, 40.0});
    write_file(out_dir / "scenario_starr.json", serialize_scenario(s) + "\n");
  }

  json sim;
  sim["case"] = "case.json";
  sim["days"] = json::array({0, kDays});
  sim["out_dir"] = "out/simulate";
  write_file(out_dir / "config_simulate.json", config_text(sim));

  sim["scenario"] = "scenario_liberty.json";
  sim["out_dir"] = "out/simulate_liberty";
  write_file(out_dir / "config_simulate_liberty.json", config_text(sim));
  sim["scenario"] = "scenario_starr.json";
  sim["out_dir"] = "out/simulate_starr";
  write_file(out_dir / "config_simulate_starr.json", config_text(sim));

  json mc;
  mc["case"] = "case.m";
  mc["format"] = "mcase";
  mc["profiles"] = "profiles.csv";
  mc["days"] = json::array({0, 2});
  mc["out_dir"] = "out/mcase";
  write_file(out_dir / "config_mcase.json", config_text(mc));

  json sw;
  sw["case"] = "case.json";
  sw["sweep"] = "sweep.json";
  sw["out_dir"] = "out/sweep";
  write_file(out_dir / "config_sweep.json", config_text(sw));

  json pf;
  pf["economics"] = "economics.csv";
  pf["programs"] = {{"rrs", "rrs.csv"}, {"ers", "ers.csv"}};
  pf["budget_mw"] = 200;
  pf["out_dir"] = "out/portfolio";
  write_file(out_dir / "config_portfolio.json", config_text(pf));

  json pr;
  pr["economics"] = "economics.csv";
  pr["price_record"] = "out/simulate/prices.csv";
  pr["price_sidecar"] = "out/simulate/prices_meta.json";
  pr["thresholds"] = json::array({0, 10, 20, 30, 40, 60, 80, 120});
  pr["draws"] = 1000;
  pr["seed"] = 7;
  pr["noise"] = {{"kind", "gaussian"}, {"sigma", 4.0}};
  pr["out_dir"] = "out/profit";
  write_file(out_dir / "config_profit.json", config_text(pr));

  std::printf("demogen: wrote demo system to %s\n", out_dir.string().c_str());
  return 0;
}
