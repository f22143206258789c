#include "sampro/space.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sampro {

namespace {

void check_weights_sum(const Eigen::VectorXd& w, const char* what) {
  if ((w.array() < 0.0).any()) throw InvalidInput(std::string(what) + ": negative weight");
  if (std::abs(w.sum() - 1.0) > 1e-12)
    throw InvalidInput(std::string(what) + ": weights must sum to 1 within 1e-12");
}

}  // namespace

Eigen::VectorXd CandidateSet::ground_or_uniform() const {
  if (ground_weights) return *ground_weights;
  return Eigen::VectorXd::Constant(size(), 1.0 / static_cast<double>(size()));
}

bool same_candidates(const CandidateSetPtr& a, const CandidateSetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->points.rows() != b->points.rows() || a->points.cols() != b->points.cols()) return false;
  return a->points == b->points;
}

CandidateSetPtr build_candidate_set(const DomainSpec& domain,
                                    std::optional<Eigen::VectorXd> ground_measure) {
  auto cs = std::make_shared<CandidateSet>();

  if (const auto* iv = std::get_if<IntervalDomain>(&domain)) {
    if (iv->size < 1) throw InvalidInput("interval domain: grid size must be >= 1");
    if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->lo > iv->hi)
      throw InvalidInput("interval domain: bounds must be finite with lo <= hi");
    cs->points.resize(iv->size, 1);
    if (iv->size == 1) {
      cs->points(0, 0) = 0.5 * (iv->lo + iv->hi);
    } else {
      const double h = (iv->hi - iv->lo) / static_cast<double>(iv->size - 1);
      for (Eigen::Index k = 0; k < iv->size; ++k) cs->points(k, 0) = iv->lo + h * static_cast<double>(k);
    }
  } else if (const auto* tor = std::get_if<TorusDomain>(&domain)) {
    if (tor->size < 1) throw InvalidInput("torus domain: grid size must be >= 1");
    cs->points.resize(tor->size, 1);
    for (Eigen::Index k = 0; k < tor->size; ++k)
      cs->points(k, 0) = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(tor->size);
  } else {
    const auto& ex = std::get<ExplicitDomain>(domain);
    if (ex.points.rows() == 0) throw InvalidInput("explicit domain: empty point list");
    if (!ex.points.allFinite()) throw InvalidInput("explicit domain: non-finite coordinate");
    cs->points = ex.points;
  }

  // Reject duplicate points; multiplicity belongs in sample multisets.
  for (Eigen::Index i = 0; i < cs->size(); ++i)
    for (Eigen::Index j = i + 1; j < cs->size(); ++j)
      if (cs->points.row(i) == cs->points.row(j)) {
        std::ostringstream msg;
        msg << "candidate set: duplicate points at indices " << i << " and " << j;
        throw InvalidInput(msg.str());
      }

  if (ground_measure) {
    if (ground_measure->size() != cs->size())
      throw InvalidInput("ground measure length does not match candidate count");
    check_weights_sum(*ground_measure, "ground measure");
    cs->ground_weights = std::move(*ground_measure);
  }
  return cs;
}

bool EvalMatrix::is_real(double tol) const {
  return values.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, values.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd EvalMatrix::real_values() const {
  if (!is_real()) throw InvalidInput("operation requires a real-valued basis");
  return values.real();
}

namespace {

Eigen::MatrixXcd chebyshev_rows(Eigen::Index n, const Eigen::VectorXd& x) {
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  Eigen::VectorXd t = (2.0 * (x.array() - lo) / span - 1.0).matrix();
  Eigen::MatrixXd rows(n, x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    double prev = 1.0, cur = t(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == 0) {
        rows(i, k) = 1.0;
      } else if (i == 1) {
        rows(i, k) = cur;
      } else {
        const double next = 2.0 * t(k) * cur - prev;
        prev = cur;
        cur = next;
        rows(i, k) = cur;
      }
    }
  }
  return rows.cast<Complex>();
}

Eigen::MatrixXcd trigonometric_rows(Eigen::Index n, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd rows(n, theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    rows(0, k) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i) {
      const Eigen::Index freq = (i + 1) / 2;
      const double arg = static_cast<double>(freq) * theta(k);
      rows(i, k) = (i % 2 == 1) ? std::cos(arg) : std::sin(arg);
    }
  }
  return rows.cast<Complex>();
}

}  // namespace

EvalMatrix evaluate_basis(const BasisSpec& basis, CandidateSetPtr candidates) {
  if (!candidates || candidates->size() == 0) throw InvalidInput("evaluate_basis: empty candidate set");
  if (basis.n < 1) throw InvalidInput("evaluate_basis: dimension n must be >= 1");

  EvalMatrix eval;
  eval.basis = basis;
  eval.candidates = std::move(candidates);
  const Eigen::VectorXd x = eval.candidates->points.col(0);

  switch (basis.family) {
    case BasisFamily::AlgebraicPolynomial:
      eval.values = chebyshev_rows(basis.n, x);
      break;
    case BasisFamily::TrigonometricPolynomial:
      eval.values = trigonometric_rows(basis.n, x);
      break;
    case BasisFamily::CustomTable:
      if (basis.table.rows() != basis.n || basis.table.cols() != eval.candidates->size())
        throw InvalidInput("custom table: shape must be n x M matching the candidate set");
      eval.values = basis.table;
      break;
  }

  // Rank check: rows must be independent as vectors over the grid.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval.values);
  const auto& sv = svd.singularValues();
  const double thresh = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  if (rank < basis.n) {
    std::ostringstream msg;
    msg << "basis is rank deficient on this grid (rank " << rank << " < n = " << basis.n
        << "); the grid is too coarse for the requested dimension";
    throw RankDeficient(msg.str());
  }
  return eval;
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool GramMatrix::positive_definite(double rel_tol) const {
  return min_eigenvalue() > rel_tol * trace();
}

GramMatrix gram_weighted(const EvalMatrix& eval, const std::vector<Eigen::Index>& support,
                         const Eigen::VectorXd& weights) {
  if (static_cast<Eigen::Index>(support.size()) != weights.size())
    throw InvalidInput("gram: support and weights size mismatch");
  const Eigen::Index n = eval.n();
  GramMatrix g;
  g.entries = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Eigen::Index idx = support[k];
    if (idx < 0 || idx >= eval.grid_size()) throw InvalidInput("gram: support index out of range");
    g.entries.noalias() += weights(static_cast<Eigen::Index>(k)) *
                           (eval.values.col(idx) * eval.values.col(idx).adjoint());
  }
  g.support = support;
  g.weights = weights;
  return g;
}

std::vector<Eigen::Index> select_invertible_points(const EvalMatrix& eval) {
  const Eigen::Index n = eval.n();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(eval.values);
  const auto perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> chosen(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) chosen[static_cast<std::size_t>(i)] = perm(i);
  std::sort(chosen.begin(), chosen.end());

  Eigen::MatrixXcd square(n, n);
  for (Eigen::Index i = 0; i < n; ++i) square.col(i) = eval.values.col(chosen[static_cast<std::size_t>(i)]);
  double row_norm_product = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) row_norm_product *= square.row(i).norm();
  const double det = std::abs(Eigen::FullPivLU<Eigen::MatrixXcd>(square).determinant());
  if (!(det > 1e-10 * row_norm_product))
    throw RankDeficient("select_invertible_points: no well-conditioned square subset found");
  return chosen;
}

Eigen::VectorXd inverse_christoffel(const EvalMatrix& eval, const GramMatrix& gram) {
  if (!gram.positive_definite())
    throw SingularMeasure("inverse_christoffel: Gram matrix is singular on V_n");
  Eigen::LLT<Eigen::MatrixXcd> llt(gram.entries);
  if (llt.info() != Eigen::Success)
    throw SingularMeasure("inverse_christoffel: Cholesky factorization failed");
  // d(x) = || L^{-1} F(x) ||^2
  Eigen::MatrixXcd solved = llt.matrixL().solve(eval.values);
  return solved.cwiseAbs2().colwise().sum().transpose();
}

std::pair<double, Eigen::Index> sup_inverse_christoffel(const EvalMatrix& eval,
                                                        const GramMatrix& gram) {
  const Eigen::VectorXd d = inverse_christoffel(eval, gram);
  Eigen::Index argmax = 0;
  for (Eigen::Index k = 1; k < d.size(); ++k)
    if (d(k) > d(argmax)) argmax = k;
  return {d(argmax), argmax};
}

}  // namespace sampro
