#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridmkt/simplex.hpp"

namespace gridmkt {

// linear program plus a subset of variables restricted to {0, 1}
struct MixedBinaryProgram {
  LinearProgram lp;
  std::vector<int> binary_vars;
};

enum class MbpStatus { optimal, infeasible, node_limit, failed };

inline const char* to_string(MbpStatus s) {
  switch (s) {
    case MbpStatus::optimal: return "optimal";
    case MbpStatus::infeasible: return "infeasible";
    case MbpStatus::node_limit: return "node_limit";
    case MbpStatus::failed: return "failed";
  }
  return "?";
}

struct MbpOptions {
  double gap = 1e-8;
  double int_tol = 1e-6;
  long node_cap = 20000;
  SimplexOptions lp;
};

struct MbpSolution {
  MbpStatus status = MbpStatus::failed;
  double objective = 0.0;
  std::vector<double> x;
  double best_bound = -kInf;
  long nodes = 0;
  SimplexBasis incumbent_basis;  // basis at the incumbent, for round chaining
};

// Depth-first branch and bound: most-fractional branching with lowest-index
// ties, nearest-integer child explored first, and a best-bound re-sort of the
// open stack every 100 nodes. Hitting node_cap reports the incumbent found so
// far under status node_limit. Child relaxations warm-start from the parent
// basis; root_warm seeds the root the same way when a caller re-solves the
// model after appending rows.
inline MbpSolution solve_mbp(const MixedBinaryProgram& mbp, const MbpOptions& opts = {},
                             const SimplexBasis* root_warm = nullptr) {
  struct Node {
    std::vector<std::pair<int, int>> fixes;  // (binary var, value)
    double parent_bound;
    SimplexBasis basis;  // parent's optimal basis
  };

  MbpSolution out;
  LinearProgram work = mbp.lp;
  for (int j : mbp.binary_vars) {
    if (j < 0 || j >= work.num_vars()) {
      throw Error(ErrorKind::invariant,
                  "binary variable index " + std::to_string(j) + " out of range");
    }
    work.lower[j] = std::max(work.lower[j], 0.0);
    work.upper[j] = std::min(work.upper[j], 1.0);
  }
  const std::vector<double> base_lower = work.lower;
  const std::vector<double> base_upper = work.upper;

  std::vector<Node> stack;
  stack.push_back({{}, -kInf, root_warm != nullptr ? *root_warm : SimplexBasis{}});
  bool have_incumbent = false;
  double incumbent = kInf;
  std::vector<double> incumbent_x;
  bool any_pruned_open = false;
  double open_bound_floor = kInf;  // lowest bound among nodes cut off by limits
  long since_sort = 0;

  auto accept_within_gap = [&](double bound) {
    return have_incumbent && incumbent - bound <= opts.gap * (1.0 + std::abs(incumbent));
  };

  while (!stack.empty()) {
    if (out.nodes >= opts.node_cap) {
      for (const Node& n : stack) {
        open_bound_floor = std::min(open_bound_floor, n.parent_bound);
      }
      any_pruned_open = true;
      break;
    }
    if (++since_sort >= 100) {
      // keep the most promising node on top without abandoning DFS
      std::sort(stack.begin(), stack.end(),
                [](const Node& a, const Node& b) { return a.parent_bound > b.parent_bound; });
      since_sort = 0;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (accept_within_gap(node.parent_bound)) continue;

    ++out.nodes;
    work.lower = base_lower;
    work.upper = base_upper;
    for (auto [j, v] : node.fixes) {
      work.lower[j] = v;
      work.upper[j] = v;
    }
    SimplexSolver solver(work, opts.lp);
    LpSolution rel = node.basis.empty() ? solver.solve() : solver.solve(node.basis);
    if (rel.status == LpStatus::infeasible) continue;
    if (rel.status != LpStatus::optimal) {
      out.status = MbpStatus::failed;
      out.best_bound = -kInf;
      if (have_incumbent) {
        out.objective = incumbent;
        out.x = incumbent_x;
      }
      return out;
    }
    if (accept_within_gap(rel.objective)) continue;

    // most fractional wins; strict improvement keeps the lowest index on ties
    int branch_var = -1;
    double best_frac_dist = opts.int_tol;
    for (int j : mbp.binary_vars) {
      double f = std::abs(rel.x[j] - std::round(rel.x[j]));
      if (f > best_frac_dist + 1e-15) {
        branch_var = j;
        best_frac_dist = f;
      }
    }

    if (branch_var < 0) {
      if (!have_incumbent || rel.objective < incumbent) {
        have_incumbent = true;
        incumbent = rel.objective;
        incumbent_x = rel.x;
        out.incumbent_basis = solver.basis();
      }
      continue;
    }

    SimplexBasis rel_basis = solver.basis();
    int near = rel.x[branch_var] >= 0.5 - 1e-15 ? 1 : 0;
    Node far_child{node.fixes, rel.objective, rel_basis};
    far_child.fixes.push_back({branch_var, 1 - near});
    Node near_child{std::move(node.fixes), rel.objective, std::move(rel_basis)};
    near_child.fixes.push_back({branch_var, near});
    stack.push_back(std::move(far_child));
    stack.push_back(std::move(near_child));  // popped first
  }

  if (any_pruned_open) {
    out.status = MbpStatus::node_limit;
    out.best_bound = open_bound_floor;
    if (have_incumbent) {
      out.objective = incumbent;
      out.x = incumbent_x;
    }
    return out;
  }
  if (!have_incumbent) {
    out.status = MbpStatus::infeasible;
    return out;
  }
  out.status = MbpStatus::optimal;
  out.objective = incumbent;
  out.x = incumbent_x;
  out.best_bound = incumbent;
  return out;
}

}  // namespace gridmkt
