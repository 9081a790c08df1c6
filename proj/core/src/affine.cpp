/// @file affine.cpp

#include "himod/affine.hpp"

#include <sstream>
#include <string>

namespace himod {

linalg::SparseMatrix AffineSystem::matrix_at(const Eigen::VectorXd& mu) const {
  if (matrices.empty()) {
    throw std::invalid_argument("AffineSystem::matrix_at: no matrix terms");
  }
  linalg::SparseMatrix a = matrix_theta[0](mu) * matrices[0];
  for (size_t q = 1; q < matrices.size(); ++q) {
    a += matrix_theta[q](mu) * matrices[q];
  }
  return a;
}

Eigen::VectorXd AffineSystem::load_at(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dim);
  for (size_t q = 0; q < loads.size(); ++q) {
    f += load_theta[q](mu) * loads[q];
  }
  return f;
}

Eigen::VectorXd solve_himod(const AffineSystem& affine, const Eigen::VectorXd& mu) {
  try {
    const linalg::SparseOperator op(affine.matrix_at(mu));
    return op.solve(affine.load_at(mu));
  } catch (const linalg::SolverError& err) {
    std::ostringstream what;
    what << err.what() << " [mu = (";
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      what << (i ? ", " : "") << mu[i];
    }
    what << ")]";
    throw linalg::SolverError(what.str());
  }
}

linalg::SparseMatrix constrain_matrix(const linalg::SparseMatrix& a, const std::vector<int>& dofs,
                                      bool unit_diagonal) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("constrain_matrix: matrix must be square");
  }
  std::vector<char> fixed(a.rows(), 0);
  for (int d : dofs) {
    if (d < 0 || d >= a.rows()) {
      throw std::invalid_argument("constrain_matrix: dof index out of range");
    }
    fixed[d] = 1;
  }
  std::vector<linalg::Triplet> triplets;
  triplets.reserve(a.nonZeros() + dofs.size());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (linalg::SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (!fixed[it.row()] && !fixed[it.col()]) {
        triplets.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  if (unit_diagonal) {
    for (Eigen::Index d = 0; d < a.rows(); ++d) {
      if (fixed[d]) {
        triplets.emplace_back(d, d, 1.0);
      }
    }
  }
  linalg::SparseMatrix out(a.rows(), a.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

InnerProduct::InnerProduct(Norm tag, linalg::SparseMatrix x)
    : tag_(tag), trivial_(false), dim_(x.rows()), x_(std::move(x)) {
  op_ = std::make_shared<linalg::SpdOperator>(x_);
}

InnerProduct InnerProduct::identity_norm(Eigen::Index dim) {
  InnerProduct p;
  p.tag_ = Norm::identity;
  p.trivial_ = true;
  p.dim_ = dim;
  linalg::SparseMatrix eye(dim, dim);
  eye.setIdentity();
  p.x_ = std::move(eye);
  return p;
}

double InnerProduct::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (trivial_) {
    return u.dot(v);
  }
  return u.dot(x_ * v);
}

double InnerProduct::norm(const Eigen::VectorXd& u) const {
  const double sq = inner(u, u);
  return std::sqrt(std::max(sq, 0.0));
}

Eigen::VectorXd InnerProduct::apply(const Eigen::VectorXd& u) const {
  if (trivial_) {
    return u;
  }
  return x_ * u;
}

Eigen::MatrixXd InnerProduct::apply(const Eigen::MatrixXd& u) const {
  if (trivial_) {
    return u;
  }
  return x_ * u;
}

Eigen::VectorXd InnerProduct::solve(const Eigen::VectorXd& r) const {
  if (trivial_) {
    return r;
  }
  return op_->solve(r);
}

Eigen::MatrixXd InnerProduct::solve(const Eigen::MatrixXd& r) const {
  if (trivial_) {
    return r;
  }
  return op_->solve(r);
}

Eigen::MatrixXd InnerProduct::gram(const Eigen::MatrixXd& phi) const {
  if (trivial_) {
    return phi.transpose() * phi;
  }
  const Eigen::MatrixXd xphi = x_ * phi;
  return phi.transpose() * xphi;
}

}  // namespace himod
