#include "sampro/design.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace sampro {

void DesignMeasure::validate() const {
  if (!candidates) throw InvalidInput("design: missing candidate set");
  if (support.empty()) throw InvalidInput("design: empty support");
  if (static_cast<Eigen::Index>(support.size()) != weights.size())
    throw InvalidInput("design: support/weights size mismatch");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= candidates->size())
      throw InvalidInput("design: support index out of range");
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j]) throw InvalidInput("design: repeated support index");
  }
  if ((weights.array() < 0.0).any()) throw InvalidInput("design: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw InvalidInput("design: weights must sum to 1 within 1e-12");
}

GramMatrix gram(const EvalMatrix& eval, const DesignMeasure& design) {
  if (!same_candidates(eval.candidates, design.candidates))
    throw InvalidInput("gram: design lives on a different candidate set");
  return gram_weighted(eval, design.support, design.weights);
}

DesignCertificate kw_certificate(const EvalMatrix& eval, const DesignMeasure& design,
                                 double epsilon) {
  const GramMatrix g = gram(eval, design);
  if (!g.positive_definite())
    throw SingularMeasure("kw_certificate: design Gram matrix is singular");
  DesignCertificate cert;
  std::tie(cert.sup_value, cert.argmax_index) = sup_inverse_christoffel(eval, g);
  cert.epsilon = epsilon;
  cert.satisfied = cert.sup_value <= static_cast<double>(eval.n()) + epsilon;
  if (cert.sup_value < static_cast<double>(eval.n()) - 1e-8)
    throw Error("kw_certificate: sup of the form fell below n, Gram inversion is unreliable");
  return cert;
}

namespace {

struct GridState {
  Eigen::VectorXd w;          // full-grid weights, zeros off support
  Eigen::MatrixXcd gram;      // Sum w_k F_k F_k^*
  Eigen::VectorXd form;       // F_k^* G^{-1} F_k per grid point
  double log_det = 0.0;
};

void refresh(const EvalMatrix& eval, GridState& s) {
  const Eigen::MatrixXcd weighted = eval.values * s.w.asDiagonal();
  s.gram.noalias() = weighted * eval.values.adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(s.gram);
  if (llt.info() != Eigen::Success)
    throw SingularMeasure("optimize_design: Gram matrix lost positive definiteness");
  s.log_det = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  const Eigen::MatrixXcd solved = llt.matrixL().solve(eval.values);
  s.form = solved.cwiseAbs2().colwise().sum().transpose();
}

DesignMeasure collect_measure(const EvalMatrix& eval, const Eigen::VectorXd& w) {
  DesignMeasure out;
  out.candidates = eval.candidates;
  std::vector<double> kept;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w(k) > 1e-12) {
      out.support.push_back(k);
      kept.push_back(w(k));
    }
  out.weights = Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  out.weights /= out.weights.sum();
  return out;
}

}  // namespace

OptimizeResult optimize_design(const EvalMatrix& eval, double epsilon, long max_iters,
                               const std::optional<DesignMeasure>& seed_design) {
  if (!(epsilon > 0.0)) throw InvalidInput("optimize_design: epsilon must be positive");
  const Eigen::Index n = eval.n();
  const Eigen::Index grid = eval.grid_size();

  GridState state;
  state.w = Eigen::VectorXd::Zero(grid);
  if (seed_design) {
    seed_design->validate();
    if (!same_candidates(eval.candidates, seed_design->candidates))
      throw InvalidInput("optimize_design: seed design lives on a different candidate set");
    for (Eigen::Index k = 0; k < seed_design->size(); ++k)
      state.w(seed_design->support[static_cast<std::size_t>(k)]) = seed_design->weights(k);
    if (!gram(eval, *seed_design).positive_definite())
      throw SingularMeasure("optimize_design: seed design has singular Gram matrix");
  } else {
    for (Eigen::Index idx : select_invertible_points(eval))
      state.w(idx) = 1.0 / static_cast<double>(n);
  }
  refresh(eval, state);

  const double target = static_cast<double>(n) + epsilon;
  long iter = 0;
  bool stalled = false;
  for (; iter < max_iters; ++iter) {
    Eigen::Index argmax = 0;
    for (Eigen::Index k = 1; k < grid; ++k)
      if (state.form(k) > state.form(argmax)) argmax = k;
    if (state.form(argmax) <= target) break;

    const double before = state.log_det;
    const bool exchange = stalled;
    if (exchange) {
      // Vertex exchange toward the worst-certified point, with the step that
      // maximizes det((1-a) G + a F F*).
      const double d = state.form(argmax);
      const double alpha =
          std::clamp((d - static_cast<double>(n)) / (static_cast<double>(n) * (d - 1.0)), 0.0, 1.0);
      state.w *= 1.0 - alpha;
      state.w(argmax) += alpha;
    } else {
      state.w.array() *= state.form.array() / static_cast<double>(n);
    }
    state.w /= state.w.sum();
    refresh(eval, state);
    if (state.log_det < before - 1e-12 * std::max(1.0, std::abs(before)))
      throw Error("optimize_design: determinant decreased across an update sweep");
    // Alternate back to multiplicative sweeps after every exchange so neither
    // update starves the other when both make slow progress.
    stalled = exchange ? false : state.log_det - before < 1e-9;
  }

  OptimizeResult result;
  result.measure = collect_measure(eval, state.w);
  result.certificate = kw_certificate(eval, result.measure, epsilon);
  result.certified = result.certificate.satisfied;
  result.sweeps = iter;
  result.log_det = state.log_det;
  return result;
}

namespace {

// Real coordinates of the Hermitian rank-one moment matrix F(x) F(x)^*.
Eigen::MatrixXd hermitian_moments(const EvalMatrix& eval, const std::vector<Eigen::Index>& support) {
  const Eigen::Index n = eval.n();
  const Eigen::Index s = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd m(n * n, s);
  for (Eigen::Index col = 0; col < s; ++col) {
    const auto f = eval.values.col(support[static_cast<std::size_t>(col)]);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      m(row++, col) = std::norm(f(i));
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Complex prod = f(i) * std::conj(f(j));
        m(row++, col) = prod.real();
        m(row++, col) = prod.imag();
      }
    }
  }
  return m;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  return rank;
}

}  // namespace

DesignMeasure caratheodory_reduce(const EvalMatrix& eval, const DesignMeasure& design) {
  design.validate();
  if (!same_candidates(eval.candidates, design.candidates))
    throw InvalidInput("caratheodory_reduce: design lives on a different candidate set");

  const Eigen::Index r = numerical_rank(hermitian_moments(eval, design.support));
  if (design.size() <= r + 1) return design;

  std::vector<Eigen::Index> support = design.support;
  Eigen::VectorXd w = design.weights;

  while (static_cast<Eigen::Index>(support.size()) > r + 1) {
    const Eigen::Index s = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd constraints(eval.n() * eval.n() + 1, s);
    constraints.topRows(eval.n() * eval.n()) = hermitian_moments(eval, support);
    constraints.bottomRows(1).setOnes();

    // Full V: the null vector lives in the trailing columns, which the thin
    // factorization does not carry when the matrix is wide.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    Eigen::VectorXd dir = svd.matrixV().col(s - 1);
    if ((constraints * dir).norm() > 1e-8 * constraints.norm())
      throw Error("caratheodory_reduce: no null direction over the support");
    if ((dir.array() > 0.0).count() == 0) dir = -dir;

    double step = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < s; ++k)
      if (dir(k) > 0.0) step = std::min(step, w(k) / dir(k));
    w -= step * dir;

    std::vector<Eigen::Index> next_support;
    std::vector<double> next_weights;
    for (Eigen::Index k = 0; k < s; ++k)
      if (w(k) > 1e-14) {
        next_support.push_back(support[static_cast<std::size_t>(k)]);
        next_weights.push_back(w(k));
      }
    if (static_cast<Eigen::Index>(next_support.size()) == s)
      throw Error("caratheodory_reduce: elimination step removed no atom");
    support = std::move(next_support);
    w = Eigen::Map<const Eigen::VectorXd>(next_weights.data(),
                                          static_cast<Eigen::Index>(next_weights.size()));
  }

  DesignMeasure out;
  out.candidates = design.candidates;
  out.support = std::move(support);
  out.weights = w / w.sum();
  return out;
}

Eigen::Index dim_product_space(const EvalMatrix& eval) {
  const Eigen::Index n = eval.n();
  Eigen::MatrixXcd products(n * n, eval.grid_size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      products.row(i * n + j) = eval.values.row(i).array() * eval.values.row(j).conjugate().array();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(products);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  return rank;
}

}  // namespace sampro
