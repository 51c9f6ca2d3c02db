#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gridmkt/lp.hpp"

namespace gridmkt {

struct SimplexOptions {
  long max_iterations = 0;     // 0 = scale with problem size
  int refactor_every = 160;    // eta factors accumulated before a fresh LU
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  int stall_limit = 40;        // degenerate steps before switching to Bland
  bool bland_only = false;
};

// Basis snapshot: one status code per structural variable and per row slack,
// plus the rows whose basic variable was an artificial. A snapshot taken from
// one solve warm-starts another over the same columns; rows appended after
// the snapshot was taken start with their slacks basic.
struct SimplexBasis {
  std::vector<unsigned char> status;
  std::vector<unsigned char> art_row;
  bool empty() const { return status.empty(); }
};

// Bounded-variable two-phase revised primal simplex. The basis is held as a
// dense LU factorization plus a product-form eta file that is rebuilt every
// refactor_every pivots. Artificials are added only for rows whose slack
// cannot absorb the initial residual; phase 2 pins them to [0, 0]. Pricing is
// Dantzig with lowest-index tie-breaks, falling back to Bland's rule after a
// run of degenerate pivots, so runs are deterministic and finite.
//
// solve(warm) re-solves after bound changes or appended rows with the dual
// simplex, which stays dual feasible because costs are unchanged. Anything
// short of a clean optimum on that path, an infeasibility claim included,
// is re-derived by the cold primal path rather than trusted.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp, SimplexOptions opts = {})
      : lp_(lp), opts_(opts) {}

  LpSolution solve() {
    load();
    cold_start();
    return primal_phases();
  }

  LpSolution solve(const SimplexBasis& warm) {
    load();
    if (try_warm(warm)) {
      RunResult r = run_dual(0);
      if (r.status == LpStatus::optimal) {
        LpSolution out = epilogue(r.iterations);
        if (out.status == LpStatus::optimal) return out;
      }
    }
    load();
    cold_start();
    return primal_phases();
  }

  // valid after a solve that returned optimal
  SimplexBasis basis() const {
    SimplexBasis b;
    b.status.resize(n_struct_ + m_);
    for (int j = 0; j < n_struct_; ++j) {
      b.status[j] = static_cast<unsigned char>(status_[j]);
    }
    for (int i = 0; i < m_; ++i) {
      b.status[n_struct_ + i] = static_cast<unsigned char>(status_[slack_begin_ + i]);
    }
    b.art_row.assign(m_, 0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= art_begin_) b.art_row[i] = 1;
    }
    return b;
  }

 private:
  enum class VarStatus : unsigned char { basic, at_lower, at_upper, free_zero };

  struct RunResult {
    LpStatus status;
    long iterations;
  };

  struct DualCand {
    double ratio;
    double arj;
    int j;
  };

  const LinearProgram& lp_;
  SimplexOptions opts_;

  int m_ = 0;             // rows
  int n_struct_ = 0;      // structural variables
  int slack_begin_ = 0;
  int art_begin_ = 0;
  int n_total_ = 0;
  int num_artificial_ = 0;
  double rhs_scale_ = 1.0;

  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> cost_, lower_, upper_, x_, rhs_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_;      // row -> variable
  std::vector<int> row_of_;     // variable -> row or -1
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<std::pair<int, Eigen::VectorXd>> etas_;  // (pivot row, eta column)
  Eigen::VectorXd y_, cb_, alpha_, rho_, work_, tmp_;  // iteration workspaces
  std::vector<DualCand> cands_;

  void load() {
    m_ = lp_.num_rows();
    n_struct_ = lp_.num_vars();
    slack_begin_ = n_struct_;
    n_total_ = n_struct_ + m_;
    art_begin_ = n_total_;
    num_artificial_ = 0;
    rhs_scale_ = 1.0;
    etas_.clear();

    cols_.assign(n_total_, {});
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, v] : lp_.rows[i].coeffs) {
        if (v != 0.0) cols_[j].push_back({i, v});
      }
    }
    lower_ = lp_.lower;
    upper_ = lp_.upper;
    cost_ = lp_.cost;
    rhs_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      rhs_[i] = lp_.rows[i].rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(rhs_[i]));
      cols_[slack_begin_ + i].push_back({i, 1.0});
      cost_.push_back(0.0);
      switch (lp_.rows[i].sense) {
        case RowSense::le:
          lower_.push_back(0.0);
          upper_.push_back(kInf);
          break;
        case RowSense::ge:
          lower_.push_back(-kInf);
          upper_.push_back(0.0);
          break;
        case RowSense::eq:
          lower_.push_back(0.0);
          upper_.push_back(0.0);
          break;
      }
    }
  }

  void cold_start() {
    // nonbasic start for structural variables
    x_.assign(n_total_, 0.0);
    status_.assign(n_total_, VarStatus::at_lower);
    for (int j = 0; j < n_struct_; ++j) {
      if (std::isfinite(lower_[j])) {
        status_[j] = VarStatus::at_lower;
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        status_[j] = VarStatus::at_upper;
        x_[j] = upper_[j];
      } else {
        status_[j] = VarStatus::free_zero;
        x_[j] = 0.0;
      }
    }

    // residuals decide between a basic slack and a basic artificial
    std::vector<double> resid = rhs_;
    for (int j = 0; j < n_struct_; ++j) {
      if (x_[j] != 0.0) {
        for (const auto& [i, v] : cols_[j]) resid[i] -= v * x_[j];
      }
    }
    basic_.assign(m_, -1);
    row_of_.assign(n_total_, -1);
    for (int i = 0; i < m_; ++i) {
      int s = slack_begin_ + i;
      if (resid[i] >= lower_[s] && resid[i] <= upper_[s]) {
        basic_[i] = s;
        status_[s] = VarStatus::basic;
        x_[s] = resid[i];
      } else {
        // park the slack at its nearest bound, cover the rest artificially
        double sval = std::clamp(resid[i], lower_[s], upper_[s]);
        if (!std::isfinite(sval)) sval = 0.0;
        x_[s] = sval;
        status_[s] = sval == upper_[s] ? VarStatus::at_upper : VarStatus::at_lower;
        double gap = resid[i] - sval;
        int a = static_cast<int>(cols_.size());
        cols_.push_back({{i, 1.0}});
        cost_.push_back(0.0);
        if (gap > 0) {
          lower_.push_back(0.0);
          upper_.push_back(kInf);
        } else {
          lower_.push_back(-kInf);
          upper_.push_back(0.0);
        }
        x_.push_back(gap);
        status_.push_back(VarStatus::basic);
        row_of_.push_back(-1);
        basic_[i] = a;
        ++num_artificial_;
      }
    }
    n_total_ = static_cast<int>(cols_.size());
    for (int i = 0; i < m_; ++i) row_of_[basic_[i]] = i;
    refactor();
  }

  // Rebuild the solver state around a snapshot basis. Bounds may differ from
  // the snapshot's origin; nonbasic variables are normalized onto the current
  // box and sign-inconsistent reduced costs on boxed variables flip across
  // it, so the start is dual feasible whenever this returns true.
  bool try_warm(const SimplexBasis& b) {
    if (b.empty()) return false;
    const std::size_t m_old = b.art_row.size();
    if (m_old > static_cast<std::size_t>(m_)) return false;
    if (b.status.size() != static_cast<std::size_t>(n_struct_) + m_old) return false;
    for (unsigned char s : b.status) {
      if (s > 3) return false;
    }

    x_.assign(n_total_, 0.0);
    status_.assign(n_total_, VarStatus::at_lower);
    for (int j = 0; j < n_struct_; ++j) {
      status_[j] = static_cast<VarStatus>(b.status[j]);
    }
    for (int i = 0; i < m_; ++i) {
      status_[slack_begin_ + i] = i < static_cast<int>(m_old)
                                      ? static_cast<VarStatus>(b.status[n_struct_ + i])
                                      : VarStatus::basic;
    }

    basic_.assign(m_, -1);
    row_of_.assign(n_total_, -1);
    for (int i = 0; i < static_cast<int>(m_old); ++i) {
      if (!b.art_row[i]) continue;
      int a = static_cast<int>(cols_.size());
      cols_.push_back({{i, 1.0}});
      cost_.push_back(0.0);
      lower_.push_back(0.0);
      upper_.push_back(0.0);
      x_.push_back(0.0);
      status_.push_back(VarStatus::basic);
      row_of_.push_back(-1);
      basic_[i] = a;
      ++num_artificial_;
    }
    n_total_ = static_cast<int>(cols_.size());

    std::vector<int> pool;
    for (int j = 0; j < art_begin_; ++j) {
      if (status_[j] == VarStatus::basic) pool.push_back(j);
    }
    std::size_t next = 0;
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= 0) continue;
      if (next >= pool.size()) return false;
      basic_[i] = pool[next++];
    }
    if (next != pool.size()) return false;
    for (int i = 0; i < m_; ++i) row_of_[basic_[i]] = i;

    for (int j = 0; j < art_begin_; ++j) {
      if (status_[j] == VarStatus::basic) continue;
      if (lower_[j] == upper_[j]) {
        status_[j] = VarStatus::at_lower;
        x_[j] = lower_[j];
        continue;
      }
      if (status_[j] == VarStatus::at_lower && !std::isfinite(lower_[j])) {
        status_[j] = std::isfinite(upper_[j]) ? VarStatus::at_upper : VarStatus::free_zero;
      }
      if (status_[j] == VarStatus::at_upper && !std::isfinite(upper_[j])) {
        status_[j] = std::isfinite(lower_[j]) ? VarStatus::at_lower : VarStatus::free_zero;
      }
      switch (status_[j]) {
        case VarStatus::at_lower: x_[j] = lower_[j]; break;
        case VarStatus::at_upper: x_[j] = upper_[j]; break;
        default: x_[j] = 0.0; break;
      }
    }

    try {
      refactor();
    } catch (const Error&) {
      return false;
    }

    const Eigen::VectorXd& y = btran();
    for (int j = 0; j < art_begin_; ++j) {
      if (status_[j] == VarStatus::basic || lower_[j] == upper_[j]) continue;
      double d = cost_[j] - col_dot(j, y);
      if (status_[j] == VarStatus::at_lower && d < -1e-7) {
        if (!std::isfinite(upper_[j])) return false;
        status_[j] = VarStatus::at_upper;
        x_[j] = upper_[j];
      } else if (status_[j] == VarStatus::at_upper && d > 1e-7) {
        if (!std::isfinite(lower_[j])) return false;
        status_[j] = VarStatus::at_lower;
        x_[j] = lower_[j];
      } else if (status_[j] == VarStatus::free_zero && std::abs(d) > 1e-7) {
        return false;
      }
    }
    recompute_basics();
    return true;
  }

  LpSolution primal_phases() {
    LpSolution out;
    long total_iters = 0;

    // phase 1: drive artificial infeasibility to zero
    if (num_artificial_ > 0) {
      for (int j = 0; j < n_total_; ++j) cost_[j] = 0.0;
      for (int j = art_begin_; j < n_total_; ++j) {
        cost_[j] = upper_[j] > 0 ? 1.0 : -1.0;
      }
      RunResult r1 = run(total_iters);
      total_iters = r1.iterations;
      if (r1.status != LpStatus::optimal) {
        out.status = r1.status == LpStatus::unbounded ? LpStatus::numerical : r1.status;
        out.iterations = total_iters;
        return out;
      }
      double infeas = 0.0;
      for (int j = art_begin_; j < n_total_; ++j) infeas += std::abs(x_[j]);
      if (infeas > 1e-7 * (1.0 + rhs_scale_)) {
        out.status = LpStatus::infeasible;
        out.iterations = total_iters;
        return out;
      }
      for (int j = art_begin_; j < n_total_; ++j) {
        lower_[j] = 0.0;
        upper_[j] = 0.0;
        if (status_[j] != VarStatus::basic) {
          status_[j] = VarStatus::at_lower;
          x_[j] = 0.0;
        }
      }
    }

    // phase 2: the real objective
    for (int j = 0; j < n_total_; ++j) {
      cost_[j] = j < n_struct_ ? lp_.cost[j] : 0.0;
    }
    RunResult r2 = run(total_iters);
    if (r2.status != LpStatus::optimal) {
      out.status = r2.status;
      out.iterations = r2.iterations;
      return out;
    }
    return epilogue(r2.iterations);
  }

  LpSolution epilogue(long iterations) {
    LpSolution out;
    out.iterations = iterations;
    refactor();
    recompute_basics();
    const Eigen::VectorXd& y = btran();
    out.x.assign(x_.begin(), x_.begin() + n_struct_);
    out.duals.assign(y.data(), y.data() + m_);
    out.reduced_costs.resize(n_struct_);
    double primal = 0.0;
    for (int j = 0; j < n_struct_; ++j) primal += lp_.cost[j] * x_[j];
    out.objective = primal;

    // duality audit: c'x must equal y'b plus the nonbasic reduced-cost terms
    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i) dual_obj += y[i] * rhs_[i];
    double worst_bound = 0.0;
    for (int j = 0; j < n_total_; ++j) {
      double d = cost_[j] - col_dot(j, y);
      if (j < n_struct_) out.reduced_costs[j] = d;
      if (status_[j] == VarStatus::basic) {
        worst_bound = std::max(worst_bound, bound_violation(j));
      } else {
        dual_obj += d * x_[j];
      }
    }
    if (worst_bound > 1e-6 * (1.0 + rhs_scale_) ||
        std::abs(primal - dual_obj) > 1e-6 * (1.0 + std::abs(primal))) {
      out.status = LpStatus::numerical;
      return out;
    }
    out.status = LpStatus::optimal;
    return out;
  }

  double col_dot(int j, const Eigen::VectorXd& y) const {
    double acc = 0.0;
    for (const auto& [i, v] : cols_[j]) acc += y[i] * v;
    return acc;
  }

  double bound_violation(int j) const {
    double v = 0.0;
    if (std::isfinite(lower_[j])) v = std::max(v, lower_[j] - x_[j]);
    if (std::isfinite(upper_[j])) v = std::max(v, x_[j] - upper_[j]);
    return v;
  }

  // x <- B^-1 x through the base factorization and the eta file
  void ftran_apply(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    tmp_ = lu_.solve(v);
    v.swap(tmp_);
    for (const auto& [r, eta] : etas_) {
      double t = v[r];
      if (t == 0.0) continue;
      v[r] = 0.0;
      v.noalias() += eta * t;
    }
  }

  // x <- B^-T x; the eta transposes apply in reverse order
  void btran_apply(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      v[it->first] = it->second.dot(v);
    }
    tmp_ = lu_.transpose().solve(v);
    v.swap(tmp_);
  }

  const Eigen::VectorXd& btran() {
    y_.resize(m_);
    for (int i = 0; i < m_; ++i) y_[i] = cost_[basic_[i]];
    btran_apply(y_);
    return y_;
  }

  const Eigen::VectorXd& ftran(int j) {
    alpha_.setZero(m_);
    for (const auto& [i, v] : cols_[j]) alpha_[i] = v;
    ftran_apply(alpha_);
    return alpha_;
  }

  const Eigen::VectorXd& basis_inverse_row(int r) {
    rho_.setZero(m_);
    rho_[r] = 1.0;
    btran_apply(rho_);
    return rho_;
  }

  void append_eta(int r, const Eigen::VectorXd& alpha) {
    Eigen::VectorXd eta = alpha / -alpha[r];
    eta[r] = 1.0 / alpha[r];
    etas_.push_back({r, std::move(eta)});
  }

  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [r, v] : cols_[basic_[i]]) b(r, i) = v;
    }
    lu_.compute(b);
    const auto diag = lu_.matrixLU().diagonal();
    double scale = diag.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || diag.cwiseAbs().minCoeff() < 1e-12 * scale) {
      throw Error(ErrorKind::structural, "singular simplex basis");
    }
    etas_.clear();
  }

  void recompute_basics() {
    if (m_ == 0) return;
    work_.resize(m_);
    for (int i = 0; i < m_; ++i) work_[i] = rhs_[i];
    for (int j = 0; j < n_total_; ++j) {
      if (status_[j] != VarStatus::basic && x_[j] != 0.0) {
        for (const auto& [i, v] : cols_[j]) work_[i] -= v * x_[j];
      }
    }
    ftran_apply(work_);
    for (int i = 0; i < m_; ++i) x_[basic_[i]] = work_[i];
  }

  RunResult run(long start_iters) {
    long iters = start_iters;
    long limit = opts_.max_iterations > 0
                     ? opts_.max_iterations
                     : 2000 + 60L * (static_cast<long>(m_) + n_total_);
    int stall = 0;
    bool bland = opts_.bland_only;

    while (true) {
      if (iters >= limit) return {LpStatus::iteration_limit, iters};
      ++iters;

      const Eigen::VectorXd& y = btran();
      int enter = -1;
      int enter_dir = 0;
      double best_score = opts_.opt_tol;
      for (int j = 0; j < n_total_; ++j) {
        if (status_[j] == VarStatus::basic) continue;
        if (lower_[j] == upper_[j]) continue;  // fixed, never enters
        double d = cost_[j] - col_dot(j, y);
        int dir = 0;
        if (status_[j] == VarStatus::at_lower && d < -opts_.opt_tol) dir = 1;
        else if (status_[j] == VarStatus::at_upper && d > opts_.opt_tol) dir = -1;
        else if (status_[j] == VarStatus::free_zero && std::abs(d) > opts_.opt_tol) {
          dir = d < 0 ? 1 : -1;
        }
        if (dir == 0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        double score = std::abs(d);
        if (score > best_score + 1e-12) {
          best_score = score;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return {LpStatus::optimal, iters};

      const Eigen::VectorXd& alpha = ftran(enter);

      // ratio test: how far can x_enter move in direction enter_dir
      double t_max = kInf;
      int leave_row = -1;
      int leave_to = 0;  // -1 lower, +1 upper
      for (int i = 0; i < m_; ++i) {
        double delta = enter_dir * alpha[i];  // basic i changes by -delta * t
        if (std::abs(delta) <= opts_.pivot_tol) continue;
        int jb = basic_[i];
        double t;
        int to;
        if (delta > 0) {
          if (!std::isfinite(lower_[jb])) continue;
          t = (x_[jb] - lower_[jb]) / delta;
          to = -1;
        } else {
          if (!std::isfinite(upper_[jb])) continue;
          t = (x_[jb] - upper_[jb]) / delta;
          to = 1;
        }
        if (t < 0) t = 0;
        if (t < t_max - 1e-12 ||
            (t < t_max + 1e-12 && (leave_row < 0 || jb < basic_[leave_row]))) {
          t_max = t;
          leave_row = i;
          leave_to = to;
        }
      }
      double t_flip = kInf;
      if (std::isfinite(lower_[enter]) && std::isfinite(upper_[enter])) {
        t_flip = upper_[enter] - lower_[enter];
      }

      if (t_flip <= t_max) {
        if (!std::isfinite(t_flip)) return {LpStatus::unbounded, iters};
        // bound flip, basis unchanged
        for (int i = 0; i < m_; ++i) {
          x_[basic_[i]] -= enter_dir * alpha[i] * t_flip;
        }
        x_[enter] += enter_dir * t_flip;
        status_[enter] =
            status_[enter] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
        stall = t_flip > 1e-12 ? 0 : stall + 1;
      } else {
        if (leave_row < 0) return {LpStatus::unbounded, iters};
        double t = t_max;
        for (int i = 0; i < m_; ++i) {
          x_[basic_[i]] -= enter_dir * alpha[i] * t;
        }
        int leave = basic_[leave_row];
        x_[enter] += enter_dir * t;
        x_[leave] = leave_to < 0 ? lower_[leave] : upper_[leave];
        status_[leave] = leave_to < 0 ? VarStatus::at_lower : VarStatus::at_upper;
        status_[enter] = VarStatus::basic;
        basic_[leave_row] = enter;
        row_of_[leave] = -1;
        row_of_[enter] = leave_row;

        append_eta(leave_row, alpha);
        if (static_cast<int>(etas_.size()) >= opts_.refactor_every) {
          refactor();
          recompute_basics();
        }
        stall = t > 1e-12 ? 0 : stall + 1;
      }

      if (!opts_.bland_only) {
        if (stall >= opts_.stall_limit) bland = true;
        else if (stall == 0) bland = false;
      }
    }
  }

  // Dual simplex from a dual-feasible basis: the most violated basic leaves,
  // the entering column comes from the bounded dual ratio test, and boxed
  // candidates whose range cannot close the violation flip across it.
  RunResult run_dual(long start_iters) {
    long iters = start_iters;
    long limit = 2L * m_ + 500;
    double vtol = opts_.feas_tol * (1.0 + rhs_scale_);

    while (true) {
      int leave_row = -1;
      int dir = 0;  // +1 above upper bound, -1 below lower bound
      double worst = vtol;
      for (int i = 0; i < m_; ++i) {
        int jb = basic_[i];
        if (std::isfinite(upper_[jb]) && x_[jb] - upper_[jb] > worst) {
          worst = x_[jb] - upper_[jb];
          leave_row = i;
          dir = 1;
        }
        if (std::isfinite(lower_[jb]) && lower_[jb] - x_[jb] > worst) {
          worst = lower_[jb] - x_[jb];
          leave_row = i;
          dir = -1;
        }
      }
      if (leave_row < 0) return {LpStatus::optimal, iters};
      if (iters >= limit) return {LpStatus::iteration_limit, iters};
      ++iters;

      const Eigen::VectorXd& y = btran();
      const Eigen::VectorXd& rho = basis_inverse_row(leave_row);

      cands_.clear();
      for (int j = 0; j < n_total_; ++j) {
        if (status_[j] == VarStatus::basic) continue;
        if (lower_[j] == upper_[j]) continue;
        double arj = col_dot(j, rho);
        if (std::abs(arj) <= opts_.pivot_tol) continue;
        bool eligible;
        if (status_[j] == VarStatus::at_lower) eligible = dir > 0 ? arj > 0 : arj < 0;
        else if (status_[j] == VarStatus::at_upper) eligible = dir > 0 ? arj < 0 : arj > 0;
        else eligible = true;
        if (!eligible) continue;
        double d = cost_[j] - col_dot(j, y);
        double ratio = dir > 0 ? d / arj : -d / arj;
        if (ratio < 0.0) ratio = 0.0;
        cands_.push_back({ratio, arj, j});
      }
      if (cands_.empty()) return {LpStatus::infeasible, iters};
      std::sort(cands_.begin(), cands_.end(), [](const DualCand& a, const DualCand& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        double fa = std::abs(a.arj), fb = std::abs(b.arj);
        if (fa != fb) return fa > fb;
        return a.j < b.j;
      });

      int jb = basic_[leave_row];
      double remaining = worst;
      int enter = -1;
      bool flipped = false;
      for (const DualCand& cd : cands_) {
        double range = upper_[cd.j] - lower_[cd.j];
        double absorb = std::isfinite(range) ? std::abs(cd.arj) * range : kInf;
        if (absorb >= remaining) {
          enter = cd.j;
          break;
        }
        double delta = status_[cd.j] == VarStatus::at_lower ? range : -range;
        if (!flipped) {
          work_.setZero(m_);
          flipped = true;
        }
        for (const auto& [i, v] : cols_[cd.j]) work_[i] += v * delta;
        status_[cd.j] =
            status_[cd.j] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
        x_[cd.j] += delta;
        remaining -= absorb;
      }
      if (enter < 0) return {LpStatus::infeasible, iters};
      if (flipped) {
        ftran_apply(work_);
        for (int i = 0; i < m_; ++i) x_[basic_[i]] -= work_[i];
      }

      const Eigen::VectorXd& alpha = ftran(enter);
      double apiv = alpha[leave_row];
      if (std::abs(apiv) < 1e-9) return {LpStatus::numerical, iters};
      double target = dir > 0 ? upper_[jb] : lower_[jb];
      double step = (x_[jb] - target) / apiv;
      for (int i = 0; i < m_; ++i) x_[basic_[i]] -= alpha[i] * step;
      x_[enter] += step;
      x_[jb] = target;
      status_[jb] = dir > 0 ? VarStatus::at_upper : VarStatus::at_lower;
      status_[enter] = VarStatus::basic;
      basic_[leave_row] = enter;
      row_of_[jb] = -1;
      row_of_[enter] = leave_row;
      append_eta(leave_row, alpha);
      if (static_cast<int>(etas_.size()) >= opts_.refactor_every) {
        refactor();
        recompute_basics();
      }
    }
  }
};

inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  return SimplexSolver(lp, opts).solve();
}

// Re-solve helper for callers that iterate on one model: warm starts from the
// snapshot when one is given and captures the optimal basis for the next
// round into basis_out.
inline LpSolution solve_lp_warm(const LinearProgram& lp, const SimplexBasis* warm,
                                SimplexBasis* basis_out, const SimplexOptions& opts = {}) {
  SimplexSolver solver(lp, opts);
  LpSolution out = warm != nullptr && !warm->empty() ? solver.solve(*warm) : solver.solve();
  if (basis_out != nullptr) {
    *basis_out = out.status == LpStatus::optimal ? solver.basis() : SimplexBasis{};
  }
  return out;
}

}  // namespace gridmkt
