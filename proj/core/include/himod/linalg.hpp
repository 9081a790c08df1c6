/// @file linalg.hpp
/// @brief Contract layer over the sparse/dense linear algebra used throughout
///        the library: direct sparse solves with a cached factorization,
///        symmetric and generalized symmetric eigensolvers, and a guarded
///        dense solve for small reduced systems.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <stdexcept>
#include <vector>

namespace himod::linalg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Raised when a factorization fails or a solve does not meet its residual
/// contract (singular or numerically unstable systems).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square sparse operator with an LU factorization computed at construction.
///
/// The operator is immutable after construction; `solve` is const and may be
/// called concurrently from several threads against the shared factorization.
class SparseOperator {
 public:
  /// Compresses and factorizes. Throws SolverError if the matrix is not
  /// square or the factorization detects structural/numerical singularity.
  explicit SparseOperator(SparseMatrix matrix);

  SparseOperator(Eigen::Index dim, const std::vector<Triplet>& triplets);

  const SparseMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Solves A x = rhs. Postcondition: ||A x - rhs|| <= 1e-10 * ||rhs||
  /// (one step of iterative refinement is attempted before failing).
  Vector solve(const Vector& rhs) const;

 private:
  SparseMatrix matrix_;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

/// Symmetric positive (semi-)definite sparse operator with a cached Cholesky
/// factorization. Used for inner-product matrices and Riesz representer
/// solves, where symmetry is a structural guarantee worth enforcing.
class SpdOperator {
 public:
  /// Requires max|A - A^T| <= 1e-12 * max|A| and a successful LDL^T
  /// factorization; throws SolverError otherwise.
  explicit SpdOperator(SparseMatrix matrix);

  const SparseMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Solves A x = rhs with the same residual contract as SparseOperator.
  Vector solve(const Vector& rhs) const;

  /// Column-wise solve for a dense block of right-hand sides.
  Matrix solve(const Matrix& rhs) const;

 private:
  SparseMatrix matrix_;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
};

/// Eigenpairs of a symmetric problem, eigenvalues in ascending order with
/// matching eigenvector columns.
struct SymEigResult {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Dense symmetric eigendecomposition. Requires max|A - A^T| small relative
/// to max|A| (tolerance 1e-10); the symmetrized matrix (A + A^T)/2 is what is
/// actually decomposed. Eigenvectors are orthonormal.
SymEigResult sym_eig(const Matrix& a);

/// Generalized symmetric-definite eigenproblem A v = lambda M v with M
/// symmetric positive definite. Eigenvalues ascending, eigenvectors
/// M-orthonormal. Throws SolverError if M is not positive definite.
SymEigResult gen_sym_eig(const Matrix& a, const Matrix& m);

/// Dense LU solve for small (reduced) systems. Postcondition:
/// ||A x - rhs|| <= 1e-10 * (||A||_inf * ||x||_inf + ||rhs||_inf);
/// throws SolverError when the system is singular to working precision.
Vector dense_solve(const Matrix& a, const Vector& rhs);

}  // namespace himod::linalg
