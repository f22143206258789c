#include "sampro/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace sampro {

namespace {

constexpr std::int64_t kNodeBudget = 20'000'000;

double hermitian_det(const Eigen::MatrixXcd& g) {
  switch (g.rows()) {
    case 1:
      return g(0, 0).real();
    case 2:
      return (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
    case 3:
      return (g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
              g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
              g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0)))
          .real();
    default:
      return Eigen::FullPivLU<Eigen::MatrixXcd>(g).determinant().real();
  }
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

// Visits every strictly increasing index tuple of the given size.
template <typename Visit>
void for_each_combination(Eigen::Index pool, Eigen::Index size, Visit&& visit) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Eigen::Index i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == pool - size + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < size; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Compositions of `total` into `size` positive parts via bar placements.
template <typename Visit>
void for_each_composition(std::int64_t total, std::int64_t size, Visit&& visit) {
  std::vector<std::int64_t> parts(static_cast<std::size_t>(size));
  for_each_combination(total - 1, size - 1, [&](const std::vector<Eigen::Index>& bars) {
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < bars.size(); ++i) {
      parts[i] = bars[i] + 1 - prev;
      prev = bars[i] + 1;
    }
    parts.back() = total - prev;
    visit(parts);
  });
}

}  // namespace

OracleResult brute_design(const EvalMatrix& eval, double weight_step, Eigen::Index max_support) {
  if (eval.grid_size() > 8) throw InvalidInput("brute_design: at most 8 candidates");
  if (eval.n() > 3) throw InvalidInput("brute_design: at most n = 3");
  if (!(weight_step >= 1e-3)) throw InvalidInput("brute_design: weight step must be >= 1e-3");
  if (max_support < eval.n()) throw InvalidInput("brute_design: max_support below n");
  max_support = std::min(max_support, eval.grid_size());

  const std::int64_t ticks = std::llround(1.0 / weight_step);
  std::int64_t node_count = 0;
  for (Eigen::Index s = 1; s <= max_support; ++s)
    node_count += binomial(eval.grid_size(), s) * binomial(ticks - 1, s - 1);
  if (node_count > kNodeBudget) throw Error("brute_design: search budget exceeded");

  std::vector<Eigen::MatrixXcd> outer;
  for (Eigen::Index k = 0; k < eval.grid_size(); ++k)
    outer.push_back(eval.values.col(k) * eval.values.col(k).adjoint());

  OracleResult result;
  result.value = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd g(eval.n(), eval.n());
  for (Eigen::Index s = 1; s <= max_support; ++s) {
    for_each_combination(eval.grid_size(), s, [&](const std::vector<Eigen::Index>& support) {
      for_each_composition(ticks, s, [&](const std::vector<std::int64_t>& parts) {
        ++result.search_size;
        g.setZero();
        for (std::size_t i = 0; i < support.size(); ++i)
          g += (static_cast<double>(parts[i]) * weight_step) *
               outer[static_cast<std::size_t>(support[i])];
        const double det = hermitian_det(g);
        if (det > result.value) {
          result.value = det;
          DesignMeasure best;
          best.candidates = eval.candidates;
          best.support = support;
          best.weights.resize(static_cast<Eigen::Index>(parts.size()));
          for (std::size_t i = 0; i < parts.size(); ++i)
            best.weights(static_cast<Eigen::Index>(i)) =
                static_cast<double>(parts[i]) * weight_step;
          best.weights /= best.weights.sum();
          result.argopt = std::move(best);
        }
      });
    });
  }
  return result;
}

OracleResult brute_subsample(const EvalMatrix& eval, const SampleMultiset& pool,
                             Eigen::Index target) {
  pool.validate();
  if (!same_candidates(eval.candidates, pool.candidates))
    throw InvalidInput("brute_subsample: pool lives on a different candidate set");
  if (target < 1 || target > pool.size())
    throw InvalidInput("brute_subsample: target must lie in [1, |pool|]");
  const std::int64_t count = binomial(pool.size(), target);
  if (count > 1'000'000) throw Error("brute_subsample: combinatorial budget exceeded");

  OracleResult result;
  result.value = std::numeric_limits<double>::infinity();
  result.search_size = count;
  SampleMultiset candidate;
  candidate.candidates = eval.candidates;
  candidate.indices.resize(static_cast<std::size_t>(target));
  for_each_combination(pool.size(), target, [&](const std::vector<Eigen::Index>& slots) {
    for (Eigen::Index i = 0; i < target; ++i)
      candidate.indices[static_cast<std::size_t>(i)] =
          pool.indices[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])];
    double constant;
    try {
      constant = discretization_constant(eval, candidate);
    } catch (const SingularMeasure&) {
      return;
    }
    if (constant < result.value) {
      result.value = constant;
      SampleMultiset best = candidate;
      std::sort(best.indices.begin(), best.indices.end());
      result.argopt = std::move(best);
    }
  });
  if (!std::isfinite(result.value))
    throw SingularMeasure("brute_subsample: no sub-multiset norms the space");
  return result;
}

OracleResult brute_chebyshev(const EvalMatrix& eval, const SampleMultiset& x_set,
                             const Eigen::VectorXd& samples, double coeff_grid_step) {
  x_set.validate();
  if (!same_candidates(eval.candidates, x_set.candidates))
    throw InvalidInput("brute_chebyshev: multiset lives on a different candidate set");
  if (samples.size() != x_set.size())
    throw InvalidInput("brute_chebyshev: sample count does not match the multiset");
  if (eval.n() > 2) throw InvalidInput("brute_chebyshev: at most n = 2");
  if (!(coeff_grid_step > 0.0)) throw InvalidInput("brute_chebyshev: step must be positive");
  if (!eval.is_real()) throw InvalidInput("brute_chebyshev: requires a real-valued basis");

  const Eigen::Index n = eval.n();
  const Eigen::Index m = x_set.size();
  const Eigen::MatrixXd real_eval = eval.real_values();
  Eigen::MatrixXd v(n, m);
  for (Eigen::Index k = 0; k < m; ++k)
    v.col(k) = real_eval.col(x_set.indices[static_cast<std::size_t>(k)]);

  const double box = 2.0 * std::max(1.0, samples.cwiseAbs().maxCoeff());
  const std::int64_t half = std::llround(box / coeff_grid_step);
  const std::int64_t per_axis = 2 * half + 1;
  std::int64_t nodes = 1;
  for (Eigen::Index i = 0; i < n; ++i) nodes *= per_axis;
  if (nodes > kNodeBudget) throw Error("brute_chebyshev: search budget exceeded");

  OracleResult result;
  result.value = std::numeric_limits<double>::infinity();
  result.search_size = nodes;
  Eigen::VectorXd c(n);
  for (std::int64_t i0 = -half; i0 <= half; ++i0) {
    c(0) = static_cast<double>(i0) * coeff_grid_step;
    for (std::int64_t i1 = n == 2 ? -half : 0; i1 <= (n == 2 ? half : 0); ++i1) {
      if (n == 2) c(1) = static_cast<double>(i1) * coeff_grid_step;
      const double err = (v.transpose() * c - samples).cwiseAbs().maxCoeff();
      if (err < result.value) {
        result.value = err;
        result.argopt = c;
      }
    }
  }
  return result;
}

}  // namespace sampro
