#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include <gridmkt/simplex.hpp>

#include "support.hpp"

using namespace gridmkt;
using testsup::near;

namespace {

double row_activity(const LinearProgram& lp, const LpRow& row,
                    const std::vector<double>& x) {
  double a = 0.0;
  for (auto [j, v] : row.coeffs) a += v * x[j];
  return a;
}

// feasibility, dual signs, complementary slackness, and the duality identity
// c'x = y'b + d'x, all at the documented tolerances
void check_optimal_certificates(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.status == LpStatus::optimal);
  REQUIRE(sol.x.size() == static_cast<std::size_t>(lp.num_vars()));
  REQUIRE(sol.duals.size() == static_cast<std::size_t>(lp.num_rows()));

  for (int j = 0; j < lp.num_vars(); ++j) {
    CHECK(sol.x[j] >= lp.lower[j] - 1e-7);
    CHECK(sol.x[j] <= lp.upper[j] + 1e-7);
  }
  double comp = 0.0;
  double yb = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const LpRow& row = lp.rows[i];
    double a = row_activity(lp, row, sol.x);
    double y = sol.duals[i];
    double scale = 1.0 + std::abs(row.rhs);
    switch (row.sense) {
      case RowSense::le:
        CHECK(a <= row.rhs + 1e-7 * scale);
        CHECK(y <= 1e-9 * scale);
        break;
      case RowSense::ge:
        CHECK(a >= row.rhs - 1e-7 * scale);
        CHECK(y >= -1e-9 * scale);
        break;
      case RowSense::eq:
        CHECK(near(a, row.rhs, 1e-7 * scale));
        break;
    }
    comp += std::abs(y * (row.rhs - a));
    yb += y * row.rhs;
  }
  CHECK(comp <= 1e-6 * (1.0 + std::abs(sol.objective)));

  double cx = 0.0, dx = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    cx += lp.cost[j] * sol.x[j];
    dx += sol.reduced_costs[j] * sol.x[j];
  }
  CHECK(near(cx, sol.objective, 1e-6 * (1.0 + std::abs(cx))));
  CHECK(std::abs(cx - yb - dx) <= 2e-6 * (1.0 + std::abs(cx) + std::abs(yb)));
}

}  // namespace

TEST_CASE("min x subject to x >= 3 prices the bound at 1") {
  LinearProgram lp;
  lp.add_variable(0.0, kInf, 1.0);
  lp.add_row(RowSense::ge, 3.0, {{0, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.objective, 3.0, 1e-9));
  CHECK(near(sol.x[0], 3.0, 1e-9));
  CHECK(near(sol.duals[0], 1.0, 1e-9));
}

TEST_CASE("two-generator dispatch prices at the marginal unit") {
  // cheap unit saturates; the 30 $/MWh unit sets the balance price
  LinearProgram lp;
  lp.add_variable(0.0, 50.0, 20.0);
  lp.add_variable(0.0, 50.0, 30.0);
  lp.add_row(RowSense::eq, 80.0, {{0, 1.0}, {1, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.x[0], 50.0, 1e-9));
  CHECK(near(sol.x[1], 30.0, 1e-9));
  CHECK(near(sol.objective, 50.0 * 20.0 + 30.0 * 30.0, 1e-9));
  CHECK(near(sol.duals[0], 30.0, 1e-9));
  // the saturated unit earns its capacity rent through the reduced cost
  CHECK(near(sol.reduced_costs[0], -10.0, 1e-9));
  check_optimal_certificates(lp, sol);
}

TEST_CASE("contradictory bounds rows are infeasible") {
  LinearProgram lp;
  lp.add_variable(0.0, kInf, 1.0);
  lp.add_row(RowSense::le, 1.0, {{0, 1.0}});
  lp.add_row(RowSense::ge, 2.0, {{0, 1.0}});
  CHECK(solve_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("missing rows leave a pure bound problem") {
  LinearProgram lp;
  lp.add_variable(1.0, 5.0, -2.0);
  lp.add_variable(-3.0, 4.0, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.x[0], 5.0, 1e-9));
  CHECK(near(sol.x[1], -3.0, 1e-9));
  CHECK(near(sol.objective, -13.0, 1e-9));
}

TEST_CASE("negative-cost ray is unbounded") {
  LinearProgram lp;
  lp.add_variable(0.0, kInf, -1.0);
  lp.add_row(RowSense::ge, 0.0, {{0, 1.0}});
  CHECK(solve_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("fixed variables act as constants") {
  LinearProgram lp;
  lp.add_variable(2.0, 2.0, 100.0);
  lp.add_variable(0.0, kInf, 1.0);
  lp.add_row(RowSense::ge, 5.0, {{0, 1.0}, {1, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.x[0], 2.0, 1e-12));
  CHECK(near(sol.x[1], 3.0, 1e-9));
  CHECK(near(sol.objective, 203.0, 1e-9));
  CHECK_THROWS_AS(lp.add_variable(3.0, 2.0, 0.0), Error);
  CHECK_THROWS_AS(lp.add_row(RowSense::le, 0.0, {{5, 1.0}}), Error);
}

TEST_CASE("equality row duals price the constraint") {
  LinearProgram lp;
  lp.add_variable(0.0, kInf, 1.0);
  lp.add_variable(0.0, kInf, 1.0);
  lp.add_row(RowSense::eq, 5.0, {{0, 1.0}, {1, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.objective, 5.0, 1e-9));
  CHECK(near(sol.duals[0], 1.0, 1e-9));
}

TEST_CASE("Beale's cycling example terminates at -0.05") {
  LinearProgram lp;
  lp.add_variable(0.0, kInf, -0.75);
  lp.add_variable(0.0, kInf, 150.0);
  lp.add_variable(0.0, kInf, -0.02);
  lp.add_variable(0.0, kInf, 6.0);
  lp.add_row(RowSense::le, 0.0, {{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}});
  lp.add_row(RowSense::le, 0.0, {{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}});
  lp.add_row(RowSense::le, 1.0, {{2, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.objective, -0.05, 1e-9));
  CHECK(near(sol.x[0], 0.04, 1e-9));
  CHECK(near(sol.x[2], 1.0, 1e-9));

  // pure Bland pricing reaches the same optimum
  SimplexOptions bland;
  bland.bland_only = true;
  LpSolution sol2 = solve_lp(lp, bland);
  REQUIRE(sol2.status == LpStatus::optimal);
  CHECK(near(sol2.objective, -0.05, 1e-9));
}

TEST_CASE("iteration cap reports iteration_limit") {
  SplitMix64 rng(77);
  LinearProgram lp = testsup::random_lp(rng);
  SimplexOptions opts;
  opts.max_iterations = 1;
  CHECK(solve_lp(lp, opts).status == LpStatus::iteration_limit);
}

TEST_CASE("random feasible LPs solve with valid certificates") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SplitMix64 rng(seed);
    LinearProgram lp = testsup::random_lp(rng);
    INFO("seed " << seed);
    LpSolution sol = solve_lp(lp);
    check_optimal_certificates(lp, sol);
  }
}

TEST_CASE("duals predict the objective under rhs perturbation") {
  const double eps = 1e-4;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SplitMix64 rng(seed);
    LinearProgram lp = testsup::random_lp(rng, /*inequality_only=*/true);
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    for (int r = 0; r < lp.num_rows(); ++r) {
      LinearProgram up = lp, down = lp;
      up.rows[r].rhs += eps;
      down.rows[r].rhs -= eps;
      LpSolution su = solve_lp(up);
      LpSolution sd = solve_lp(down);
      if (su.status != LpStatus::optimal || sd.status != LpStatus::optimal) continue;
      double g_plus = (su.objective - sol.objective) / eps;
      double g_minus = (sol.objective - sd.objective) / eps;
      // a kink at the current rhs means the dual sits on a degenerate
      // breakpoint; the prediction only binds on the smooth interval
      if (std::abs(g_plus - g_minus) > 0.005 * (1.0 + std::abs(sol.duals[r]))) continue;
      INFO("seed " << seed << " row " << r);
      CHECK(std::abs(g_plus - sol.duals[r]) <= 0.01 * (std::abs(sol.duals[r]) + 1e-6));
      ++checked;
    }
  }
  // the skip clauses must not hollow the property out
  CHECK(checked >= 50);
}

TEST_CASE("repeat solves are bit-identical") {
  SplitMix64 rng(2024);
  LinearProgram lp = testsup::random_lp(rng);
  LpSolution a = solve_lp(lp);
  LpSolution b = solve_lp(lp);
  REQUIRE(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.x.size() == b.x.size());
  CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.duals.data(), b.duals.data(), a.duals.size() * sizeof(double)) == 0);
}

TEST_CASE("degenerate staircase still terminates") {
  // many redundant rows through the same vertex
  LinearProgram lp;
  lp.add_variable(0.0, kInf, -1.0);
  lp.add_variable(0.0, kInf, -1.0);
  for (int k = 1; k <= 12; ++k) {
    lp.add_row(RowSense::le, 4.0, {{0, 1.0 * k / k}, {1, 1.0}});
  }
  lp.add_row(RowSense::le, 2.0, {{0, 1.0}});
  lp.add_row(RowSense::le, 2.0, {{1, 1.0}});
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(near(sol.objective, -4.0, 1e-9));
}
