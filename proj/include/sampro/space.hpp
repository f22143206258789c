#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "sampro/errors.hpp"

namespace sampro {

using Complex = std::complex<double>;

/// Finite candidate domain: the points the whole pipeline is allowed to
/// sample from, plus an optional ground probability weight per point.
struct CandidateSet {
  Eigen::MatrixXd points;  // M x d, one row per point
  std::optional<Eigen::VectorXd> ground_weights;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  /// Ground weights if present, otherwise uniform 1/M.
  Eigen::VectorXd ground_or_uniform() const;
};

using CandidateSetPtr = std::shared_ptr<const CandidateSet>;

/// True if both multisets/measures were built over the same grid.
bool same_candidates(const CandidateSetPtr& a, const CandidateSetPtr& b);

struct IntervalDomain {
  double lo = -1.0;
  double hi = 1.0;
  Eigen::Index size = 0;
};

struct TorusDomain {
  Eigen::Index size = 0;  // points 2*pi*k/size, k = 0..size-1
};

struct ExplicitDomain {
  Eigen::MatrixXd points;  // M x d
};

using DomainSpec = std::variant<IntervalDomain, TorusDomain, ExplicitDomain>;

CandidateSetPtr build_candidate_set(const DomainSpec& domain,
                                    std::optional<Eigen::VectorXd> ground_measure = {});

enum class BasisFamily { AlgebraicPolynomial, TrigonometricPolynomial, CustomTable };

/// Basis of the n-dimensional target space V_n.
///
/// AlgebraicPolynomial: Chebyshev polynomials T_0..T_{n-1} of the first
/// coordinate, affinely rescaled from the grid's coordinate range to [-1,1]
/// (same span as the monomials, far better conditioned).
/// TrigonometricPolynomial: 1, cos t, sin t, cos 2t, sin 2t, ... truncated
/// at n terms, in the first coordinate.
/// CustomTable: an explicit n x M value table over the candidate set.
struct BasisSpec {
  BasisFamily family = BasisFamily::AlgebraicPolynomial;
  Eigen::Index n = 0;
  Eigen::MatrixXcd table;  // CustomTable only
};

/// Values of the basis over the candidate grid; entry (i, k) = f_i(x_k).
/// Construction guarantees the rows are independent on the grid.
struct EvalMatrix {
  Eigen::MatrixXcd values;  // n x M
  BasisSpec basis;
  CandidateSetPtr candidates;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index grid_size() const { return values.cols(); }
  bool is_real(double tol = 1e-14) const;
  /// Real part of the values; throws unless is_real().
  Eigen::MatrixXd real_values() const;
};

EvalMatrix evaluate_basis(const BasisSpec& basis, CandidateSetPtr candidates);

/// Gram matrix of the basis under an atomic measure; entry
/// (i, j) = sum_k w_k f_i(x_k) conj(f_j(x_k)). Hermitian PSD by construction.
struct GramMatrix {
  Eigen::MatrixXcd entries;
  std::vector<Eigen::Index> support;  // atoms of the measure it came from
  Eigen::VectorXd weights;

  double trace() const { return entries.real().trace(); }
  /// Smallest eigenvalue (Hermitian).
  double min_eigenvalue() const;
  bool positive_definite(double rel_tol = 1e-12) const;
};

GramMatrix gram_weighted(const EvalMatrix& eval, const std::vector<Eigen::Index>& support,
                         const Eigen::VectorXd& weights);

/// n candidate indices whose square evaluation matrix is invertible, chosen
/// by greedy volume-maximizing column pivoting. Seeds design optimization.
std::vector<Eigen::Index> select_invertible_points(const EvalMatrix& eval);

/// The quadratic form d(x) = F(x)^* G^{-1} F(x) for every grid point
/// (inverse Christoffel function). Throws SingularMeasure if G is not
/// positive definite.
Eigen::VectorXd inverse_christoffel(const EvalMatrix& eval, const GramMatrix& gram);

/// Max of inverse_christoffel and its argmax (lowest index on ties).
std::pair<double, Eigen::Index> sup_inverse_christoffel(const EvalMatrix& eval,
                                                        const GramMatrix& gram);

}  // namespace sampro
