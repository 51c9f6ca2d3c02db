#pragma once

#include <utility>
#include <vector>

#include "gridmkt/common.hpp"

namespace gridmkt {

enum class RowSense { le, ge, eq };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

// minimize c'x subject to row constraints and variable bounds
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(double lo, double hi, double c) {
    if (lo > hi) {
      throw Error(ErrorKind::invariant, "variable lower bound " + fmt_double(lo) +
                                            " exceeds upper bound " + fmt_double(hi));
    }
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    return num_vars() - 1;
  }

  int add_row(RowSense sense, double rhs, std::vector<std::pair<int, double>> coeffs) {
    for (auto& [j, v] : coeffs) {
      if (j < 0 || j >= num_vars()) {
        throw Error(ErrorKind::invariant,
                    "row references variable " + std::to_string(j) + " of " +
                        std::to_string(num_vars()));
      }
      (void)v;
    }
    rows.push_back(LpRow{std::move(coeffs), sense, rhs});
    return num_rows() - 1;
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical: return "numerical";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::numerical;
  double objective = 0.0;
  std::vector<double> x;              // structural variables
  std::vector<double> duals;          // per row, d objective / d rhs
  std::vector<double> reduced_costs;  // per structural variable
  long iterations = 0;
};

}  // namespace gridmkt
