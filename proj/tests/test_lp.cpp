#include <Eigen/Core>
#include <cmath>

#include "doctest.h"
#include "sampro/lp.hpp"
#include "sampro/rng.hpp"

using namespace sampro;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> entries) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v(i++) = e;
  return v;
}

}  // namespace

TEST_CASE("simplex solves a bounded problem with the known optimum") {
  // max x1 + 2 x2  s.t.  x1 + x2 <= 4, x2 <= 3  (slacks appended).
  const Eigen::MatrixXd a = mat({{1, 1, 1, 0}, {0, 1, 0, 1}});
  const LpSolution sol = solve_standard_lp(a, vec({4, 3}), vec({1, 2, 0, 0}));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(7.0));
  CHECK(sol.x(0) == doctest::Approx(1.0));
  CHECK(sol.x(1) == doctest::Approx(3.0));
  // Strong duality and dual feasibility.
  CHECK(vec({4, 3}).dot(sol.multipliers) == doctest::Approx(7.0));
  const Eigen::VectorXd reduced = a.transpose() * sol.multipliers - vec({1, 2, 0, 0});
  CHECK(reduced.minCoeff() >= -1e-7);
  // Complementary slackness.
  CHECK(std::abs(reduced.dot(sol.x)) <= 1e-7);
}

TEST_CASE("simplex detects infeasibility") {
  const Eigen::MatrixXd a = mat({{1, 1}});
  const LpSolution sol = solve_standard_lp(a, vec({-1}), vec({1, 1}));
  CHECK(sol.status == LpStatus::Infeasible);
}

TEST_CASE("simplex detects unboundedness") {
  // max x1  s.t.  x1 - x2 = 1: x = (1 + t, t) is feasible for all t >= 0.
  const Eigen::MatrixXd a = mat({{1, -1}});
  const LpSolution sol = solve_standard_lp(a, vec({1}), vec({1, 0}));
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("simplex handles redundant rows via artificials parked at zero") {
  // Second row is twice the first; phase one cannot drive its artificial out.
  const Eigen::MatrixXd a = mat({{1, 1}, {2, 2}});
  const LpSolution sol = solve_standard_lp(a, vec({1, 2}), vec({1, 0}));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK((a * sol.x - vec({1, 2})).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("simplex survives a degenerate vertex") {
  // The origin-adjacent vertex is degenerate: two constraints meet where one
  // basic variable sits at zero. Optimum is x = (1, 1), objective 2.
  const Eigen::MatrixXd a = mat({{1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}, {1, 1, 0, 0, 1}});
  const LpSolution sol = solve_standard_lp(a, vec({1, 1, 2}), vec({1, 1, 0, 0, 0}));
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("random equality-form instances satisfy the optimality conditions") {
  Rng rng(2024);
  int optimal_seen = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index rows = 4, cols = 9;
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.normal();
    // Feasible by construction: b = A x0 with x0 >= 0.
    Eigen::VectorXd x0(cols);
    for (Eigen::Index j = 0; j < cols; ++j) x0(j) = rng.uniform01();
    const Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(cols);
    for (Eigen::Index j = 0; j < cols; ++j) c(j) = rng.normal();

    const LpSolution sol = solve_standard_lp(a, b, c);
    REQUIRE((sol.status == LpStatus::Optimal || sol.status == LpStatus::Unbounded));
    if (sol.status != LpStatus::Optimal) continue;
    ++optimal_seen;
    CHECK((a * sol.x - b).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(sol.x.minCoeff() >= -1e-9);
    CHECK(sol.objective >= c.dot(x0) - 1e-7);  // at least as good as x0
    const Eigen::VectorXd reduced = a.transpose() * sol.multipliers - c;
    CHECK(reduced.minCoeff() >= -1e-6);
    CHECK(std::abs(c.dot(sol.x) - b.dot(sol.multipliers)) <= 1e-6);
  }
  CHECK(optimal_seen >= 5);
}
