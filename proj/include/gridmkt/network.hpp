#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gridmkt/common.hpp"
#include "gridmkt/gridcase.hpp"

namespace gridmkt {

// DC network sensitivities for one case topology. Rows of `ptdf` follow
// `branch_rows` (monitored branches: in service with a finite flow limit,
// original branch order); columns follow `bus_ids`. The reference column is
// identically zero.
struct NetworkModel {
  std::vector<int> bus_ids;
  std::vector<int> branch_rows;
  int reference_bus = 0;
  Eigen::MatrixXd ptdf;

  int bus_col(int bus_id) const {
    for (std::size_t i = 0; i < bus_ids.size(); ++i) {
      if (bus_ids[i] == bus_id) return static_cast<int>(i);
    }
    throw Error(ErrorKind::reference, "bus " + std::to_string(bus_id) +
                                          " is not part of the network model");
  }
};

inline int default_reference_bus(const GridCase& c) {
  // largest total generator capacity wins, lowest bus id on ties
  std::map<int, double> cap;
  for (const auto& g : c.generators) cap[g.bus] += g.p_max;
  int best = c.buses.front().id;
  double best_cap = cap.count(best) ? cap[best] : 0.0;
  for (const auto& b : c.buses) {
    double v = cap.count(b.id) ? cap[b.id] : 0.0;
    if (v > best_cap + 1e-12 ||
        (std::abs(v - best_cap) <= 1e-12 && b.id < best)) {
      best = b.id;
      best_cap = v;
    }
  }
  return best;
}

inline NetworkModel build_network(const GridCase& c, int reference_bus = -1) {
  validate_case(c);
  NetworkModel m;
  for (const auto& b : c.buses) m.bus_ids.push_back(b.id);
  m.reference_bus = reference_bus < 0 ? default_reference_bus(c) : reference_bus;

  const int n = static_cast<int>(m.bus_ids.size());
  int ref = -1;
  std::map<int, int> col;
  for (int i = 0; i < n; ++i) {
    col[m.bus_ids[i]] = i;
    if (m.bus_ids[i] == m.reference_bus) ref = i;
  }
  if (ref < 0) {
    throw Error(ErrorKind::reference,
                "reference bus " + std::to_string(m.reference_bus) + " does not exist");
  }

  // monitored rows: in service with a finite limit; the susceptance network
  // still includes every in-service branch
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    if (c.branches[l].in_service && c.branches[l].flow_limit) {
      m.branch_rows.push_back(static_cast<int>(l));
    }
  }
  const int L = static_cast<int>(m.branch_rows.size());

  Eigen::MatrixXd b_line = Eigen::MatrixXd::Zero(L, n);
  Eigen::MatrixXd b_bus = Eigen::MatrixXd::Zero(n, n);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    double b = 1.0 / br.reactance;
    int i = col[br.from_bus];
    int j = col[br.to_bus];
    b_bus(i, i) += b;
    b_bus(j, j) += b;
    b_bus(i, j) -= b;
    b_bus(j, i) -= b;
  }
  for (int r = 0; r < L; ++r) {
    const Branch& br = c.branches[m.branch_rows[r]];
    double b = 1.0 / br.reactance;
    b_line(r, col[br.from_bus]) = b;
    b_line(r, col[br.to_bus]) = -b;
  }

  // drop the reference row/column, factor the rest
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (i != ref) keep.push_back(i);
  }
  const int k = n - 1;
  Eigen::MatrixXd b_red(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) b_red(a, b) = b_bus(keep[a], keep[b]);
  }

  m.ptdf = Eigen::MatrixXd::Zero(L, n);
  if (k > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b_red);
    // injection-to-angle inverse, checked against the factored matrix
    Eigen::MatrixXd x = lu.solve(Eigen::MatrixXd::Identity(k, k));
    double residual = (b_red * x - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-10 * (1.0 + b_red.cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::structural,
                  "susceptance matrix is numerically singular (residual " +
                      fmt_double(residual) + ")");
    }
    Eigen::MatrixXd b_line_red(L, k);
    for (int a = 0; a < k; ++a) b_line_red.col(a) = b_line.col(keep[a]);
    Eigen::MatrixXd ptdf_red = b_line_red * x;
    for (int a = 0; a < k; ++a) m.ptdf.col(keep[a]) = ptdf_red.col(a);
  }
  return m;
}

// Branch flows for a balanced injection vector (MW per bus, generation minus
// load, ordered like bus_ids). Positive flow runs from_bus -> to_bus.
inline std::vector<double> line_flows(const NetworkModel& m,
                                      const std::vector<double>& injections) {
  if (injections.size() != m.bus_ids.size()) {
    throw Error(ErrorKind::invariant, "injection vector has " +
                    std::to_string(injections.size()) + " entries for " +
                    std::to_string(m.bus_ids.size()) + " buses");
  }
  double total = 0.0;
  double scale = 1.0;
  for (double v : injections) {
    total += v;
    scale = std::max(scale, std::abs(v));
  }
  if (std::abs(total) > 1e-6 * scale) {
    throw Error(ErrorKind::invariant,
                "injections are unbalanced by " + fmt_double(total) + " MW");
  }
  Eigen::Map<const Eigen::VectorXd> p(injections.data(), injections.size());
  Eigen::VectorXd f = m.ptdf * p;
  return std::vector<double>(f.data(), f.data() + f.size());
}

}  // namespace gridmkt
