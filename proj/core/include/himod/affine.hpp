/// @file affine.hpp
/// @brief Parameter-affine operator containers: A(mu) = sum_q theta_q(mu) A_q
///        and f(mu) = sum_q theta_q(mu) f_q, plus the inner-product matrices
///        that define every norm used downstream.

#pragma once

#include "himod/linalg.hpp"

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <vector>

namespace himod {

/// Scalar coefficient map theta_q(mu): either a fixed constant or the value
/// of one parameter slot.
struct Theta {
  enum class Kind { constant, parameter };

  Kind kind = Kind::constant;
  double value = 1.0;
  int slot = -1;

  static Theta constant(double v) { return {Kind::constant, v, -1}; }
  static Theta parameter(int slot) { return {Kind::parameter, 1.0, slot}; }

  double operator()(const Eigen::VectorXd& mu) const {
    if (kind == Kind::constant) {
      return value;
    }
    if (slot < 0 || slot >= mu.size()) {
      throw std::invalid_argument("Theta: parameter slot " + std::to_string(slot) +
                                  " outside parameter vector of size " + std::to_string(mu.size()));
    }
    return mu[slot];
  }
};

/// Affine decomposition of a linear system. Essential constraints are
/// already eliminated: constrained rows/columns are zero in every block and
/// load, and the block at index 0 carries a unit diagonal on the constrained
/// dofs (its coefficient must stay positive over the parameter domain), so
/// that A(mu) remains invertible and constrained solution entries are zero.
struct AffineSystem {
  Eigen::Index dim = 0;
  int parameter_dim = 0;
  std::vector<linalg::SparseMatrix> matrices;
  std::vector<Theta> matrix_theta;
  std::vector<Eigen::VectorXd> loads;
  std::vector<Theta> load_theta;
  std::vector<int> constrained_dofs;

  int matrix_terms() const { return static_cast<int>(matrices.size()); }
  int load_terms() const { return static_cast<int>(loads.size()); }

  linalg::SparseMatrix matrix_at(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd load_at(const Eigen::VectorXd& mu) const;
};

/// Solves A(mu) u = f(mu) with a direct sparse factorization; relative
/// algebraic residual <= 1e-10 guaranteed by the solver contract. Errors are
/// annotated with the offending parameter value.
Eigen::VectorXd solve_himod(const AffineSystem& affine, const Eigen::VectorXd& mu);

/// Zeroes the given rows and columns; optionally places 1 on the eliminated
/// diagonal so the matrix stays invertible on the full index set.
linalg::SparseMatrix constrain_matrix(const linalg::SparseMatrix& a, const std::vector<int>& dofs,
                                      bool unit_diagonal);

/// Symmetric positive-definite inner-product matrix with a cached
/// factorization for repeated Riesz solves X z = r. The `identity` tag is a
/// fast path for Euclidean inner products (no matrix stored).
class InnerProduct {
 public:
  enum class Norm { h1, l2, identity };

  InnerProduct() = default;

  /// Wraps an assembled SPD matrix; verifies symmetry and factorizes.
  InnerProduct(Norm tag, linalg::SparseMatrix x);

  static InnerProduct identity_norm(Eigen::Index dim);

  Norm tag() const { return tag_; }
  Eigen::Index dim() const { return dim_; }
  bool is_identity() const { return trivial_; }
  const linalg::SparseMatrix& matrix() const { return x_; }

  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double norm(const Eigen::VectorXd& u) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& u) const;

  /// Riesz solve X z = r.
  Eigen::VectorXd solve(const Eigen::VectorXd& r) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& r) const;

  /// phi^T X phi.
  Eigen::MatrixXd gram(const Eigen::MatrixXd& phi) const;

 private:
  Norm tag_ = Norm::identity;
  bool trivial_ = true;
  Eigen::Index dim_ = 0;
  linalg::SparseMatrix x_;
  std::shared_ptr<linalg::SpdOperator> op_;
};

}  // namespace himod
