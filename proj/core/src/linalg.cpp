/// @file linalg.cpp

#include "himod/linalg.hpp"

#include <cmath>
#include <string>

namespace himod::linalg {

namespace {

SparseMatrix from_triplets(Eigen::Index dim, const std::vector<Triplet>& triplets) {
  SparseMatrix a(dim, dim);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

}  // namespace

SparseOperator::SparseOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw SolverError("SparseOperator: matrix must be square, got " +
                      std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()));
  }
  matrix_.makeCompressed();
  lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
  lu_->compute(matrix_);
  if (lu_->info() != Eigen::Success) {
    throw SolverError("SparseOperator: LU factorization failed (singular matrix?)");
  }
}

SparseOperator::SparseOperator(Eigen::Index dim, const std::vector<Triplet>& triplets)
    : SparseOperator(from_triplets(dim, triplets)) {}

Vector SparseOperator::solve(const Vector& rhs) const {
  if (rhs.size() != matrix_.rows()) {
    throw SolverError("SparseOperator::solve: rhs size mismatch");
  }
  Vector x = lu_->solve(rhs);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    return Vector::Zero(rhs.size());
  }
  double residual = (matrix_ * x - rhs).norm();
  if (residual > 1e-10 * rhs_norm) {
    // One step of iterative refinement before declaring failure.
    const Vector correction = lu_->solve(rhs - matrix_ * x);
    x += correction;
    residual = (matrix_ * x - rhs).norm();
    if (residual > 1e-10 * rhs_norm) {
      throw SolverError("SparseOperator::solve: relative residual " +
                        std::to_string(residual / rhs_norm) + " exceeds 1e-10");
    }
  }
  return x;
}

SpdOperator::SpdOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw SolverError("SpdOperator: matrix must be square");
  }
  matrix_.makeCompressed();
  const double scale = max_abs(matrix_);
  const SparseMatrix asym = SparseMatrix(matrix_.transpose()) - matrix_;
  if (max_abs(asym) > 1e-12 * scale) {
    throw SolverError("SpdOperator: matrix is not symmetric within 1e-12");
  }
  ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>();
  ldlt_->compute(matrix_);
  if (ldlt_->info() != Eigen::Success) {
    throw SolverError("SpdOperator: LDL^T factorization failed (matrix not positive definite?)");
  }
}

Vector SpdOperator::solve(const Vector& rhs) const {
  if (rhs.size() != matrix_.rows()) {
    throw SolverError("SpdOperator::solve: rhs size mismatch");
  }
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    return Vector::Zero(rhs.size());
  }
  Vector x = ldlt_->solve(rhs);
  double residual = (matrix_ * x - rhs).norm();
  if (residual > 1e-10 * rhs_norm) {
    const Vector correction = ldlt_->solve(rhs - matrix_ * x);
    x += correction;
    residual = (matrix_ * x - rhs).norm();
    if (residual > 1e-10 * rhs_norm) {
      throw SolverError("SpdOperator::solve: relative residual " +
                        std::to_string(residual / rhs_norm) + " exceeds 1e-10");
    }
  }
  return x;
}

Matrix SpdOperator::solve(const Matrix& rhs) const {
  Matrix x(rhs.rows(), rhs.cols());
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
    x.col(j) = solve(Vector(rhs.col(j)));
  }
  return x;
}

SymEigResult sym_eig(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw SolverError("sym_eig: matrix must be square");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale > 0.0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw SolverError("sym_eig: matrix is not symmetric within 1e-10");
  }
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw SolverError("sym_eig: eigendecomposition failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SymEigResult gen_sym_eig(const Matrix& a, const Matrix& m) {
  if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
    throw SolverError("gen_sym_eig: dimension mismatch");
  }
  const double a_scale = a.cwiseAbs().maxCoeff();
  if (a_scale > 0.0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * a_scale) {
    throw SolverError("gen_sym_eig: A is not symmetric within 1e-10");
  }
  // GeneralizedSelfAdjointEigenSolver assumes M = L L^T; verify definiteness
  // explicitly so indefinite mass matrices fail loudly instead of silently.
  Eigen::LLT<Matrix> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) {
    throw SolverError("gen_sym_eig: M is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      0.5 * (a + a.transpose()), 0.5 * (m + m.transpose()),
      Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw SolverError("gen_sym_eig: eigendecomposition failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector dense_solve(const Matrix& a, const Vector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) {
    throw SolverError("dense_solve: dimension mismatch");
  }
  if (a.rows() == 0) {
    return Vector();
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const Vector x = lu.solve(rhs);
  const double scale = a.cwiseAbs().maxCoeff() * (x.size() ? x.cwiseAbs().maxCoeff() : 0.0) +
                       (rhs.size() ? rhs.cwiseAbs().maxCoeff() : 0.0);
  const double residual = (a * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale + 1e-300)) {
    throw SolverError("dense_solve: system is singular to working precision (residual " +
                      std::to_string(residual) + ")");
  }
  return x;
}

}  // namespace himod::linalg
