#include "sampro/lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace sampro {

namespace {

struct Tableau {
  const Eigen::MatrixXd& A;  // m x n, original columns
  Eigen::Index m;
  Eigen::Index n;

  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < n) return A.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e(j - n) = 1.0;  // artificial
    return e;
  }
};

// One simplex phase: maximize cost over the current basis. cost has size
// n + m (artificials included). Columns with allow_enter[j] == false never
// enter the basis.
LpStatus run_phase(const Tableau& tab, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& cost, const std::vector<char>& allow_enter,
                   std::vector<int>& basis, const LpOptions& opts, long& iters,
                   long iter_budget) {
  const Eigen::Index m = tab.m;
  const Eigen::Index total = tab.n + m;

  bool bland = false;
  long stall = 0;
  double last_obj = -std::numeric_limits<double>::infinity();

  while (true) {
    if (iters >= iter_budget) return LpStatus::IterationLimit;
    ++iters;

    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = tab.column(basis[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return LpStatus::IterationLimit;  // numerical breakdown

    Eigen::VectorXd xb = lu.solve(b);
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb(i) = cost(basis[i]);
    const double obj = cb.dot(xb);
    Eigen::VectorXd y = lu.transpose().solve(cb);

    if (obj > last_obj + opts.tol * (1.0 + std::abs(last_obj))) {
      stall = 0;
      last_obj = obj;
    } else if (++stall > 100) {
      bland = true;  // anti-cycling
    }

    // Pricing.
    std::vector<char> in_basis(static_cast<std::size_t>(total), 0);
    for (int j : basis) in_basis[static_cast<std::size_t>(j)] = 1;
    Eigen::Index enter = -1;
    double best_red = opts.tol;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (in_basis[static_cast<std::size_t>(j)] || !allow_enter[static_cast<std::size_t>(j)])
        continue;
      const double red = cost(j) - y.dot(tab.column(j));
      if (red > best_red) {
        enter = j;
        if (bland) break;
        best_red = red;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    Eigen::VectorXd w = lu.solve(tab.column(enter));

    // Ratio test, smallest basic index on ties.
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (w(i) > opts.tol) {
        const double ratio = std::max(xb(i), 0.0) / w(i);
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return LpStatus::Unbounded;
    basis[leave] = static_cast<int>(enter);
  }
}

}  // namespace

LpSolution solve_standard_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                             const Eigen::VectorXd& c, const LpOptions& opts) {
  const Eigen::Index m = A_in.rows();
  const Eigen::Index n = A_in.cols();

  // Flip rows so b >= 0 (artificial starting basis must be feasible). The
  // exported multipliers are flipped back at the end.
  Eigen::MatrixXd A = A_in;
  Eigen::VectorXd b = b_in;
  std::vector<char> flipped(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      b(i) = -b(i);
      A.row(i) = -A.row(i);
      flipped[static_cast<std::size_t>(i)] = 1;
    }
  }

  Tableau tab{A, m, n};
  const Eigen::Index total = n + m;

  LpSolution sol;
  sol.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) sol.basis[static_cast<std::size_t>(i)] = static_cast<int>(n + i);

  std::vector<char> allow(static_cast<std::size_t>(total), 1);

  // Phase 1: drive the artificial variables to zero.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(total);
  cost1.tail(m).setConstant(-1.0);
  LpStatus st = run_phase(tab, b, cost1, allow, sol.basis, opts, sol.iterations, opts.max_iters);
  if (st != LpStatus::Optimal) {
    sol.status = st;
    return sol;
  }
  {
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = tab.column(sol.basis[static_cast<std::size_t>(i)]);
    Eigen::VectorXd xb = Eigen::FullPivLU<Eigen::MatrixXd>(B).solve(b);
    double infeas = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (sol.basis[static_cast<std::size_t>(i)] >= n) infeas += std::abs(xb(i));
    if (infeas > opts.tol * (1.0 + b.lpNorm<1>())) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
  }

  // Phase 2: artificials may stay basic at zero level but never re-enter.
  for (Eigen::Index j = n; j < total; ++j) allow[static_cast<std::size_t>(j)] = 0;
  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(total);
  cost2.head(n) = c;
  st = run_phase(tab, b, cost2, allow, sol.basis, opts, sol.iterations, opts.max_iters);
  sol.status = st;
  if (st != LpStatus::Optimal && st != LpStatus::Unbounded) return sol;

  // Extract solution and multipliers from the final basis.
  Eigen::MatrixXd B(m, m);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    B.col(i) = tab.column(sol.basis[static_cast<std::size_t>(i)]);
    cb(i) = cost2(sol.basis[static_cast<std::size_t>(i)]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  Eigen::VectorXd xb = lu.solve(b);
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int j = sol.basis[static_cast<std::size_t>(i)];
    if (j < n) sol.x(j) = std::max(xb(i), 0.0);
  }
  sol.multipliers = lu.transpose().solve(cb);
  for (Eigen::Index i = 0; i < m; ++i)
    if (flipped[static_cast<std::size_t>(i)]) sol.multipliers(i) = -sol.multipliers(i);
  sol.objective = c.dot(sol.x);
  return sol;
}

}  // namespace sampro
