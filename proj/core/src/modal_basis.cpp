/// @file modal_basis.cpp

#include "himod/modal_basis.hpp"

#include "himod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace himod {

namespace {

/// Evaluates the orthonormal shifted Legendre functions
///   L_i(y) = sqrt(2i+1) * P_i(2y),  i = 0..n-1,
/// (orthonormal on (-1/2, 1/2)) together with their derivatives.
void orthonormal_legendre(int n, double y_hat, Eigen::VectorXd& values, Eigen::VectorXd& derivs) {
  values.resize(n);
  derivs.resize(n);
  const double t = 2.0 * y_hat;
  double p_prev = 1.0, p_curr = t;
  double d_prev = 0.0, d_curr = 1.0;
  for (int i = 0; i < n; ++i) {
    double p, d;
    if (i == 0) {
      p = 1.0;
      d = 0.0;
    } else if (i == 1) {
      p = t;
      d = 1.0;
    } else {
      p = ((2.0 * i - 1.0) * t * p_curr - (i - 1.0) * p_prev) / i;
      d = d_prev + (2.0 * i - 1.0) * p_curr;  // P_i' = P_{i-2}' + (2i-1) P_{i-1}
      p_prev = p_curr;
      p_curr = p;
      d_prev = d_curr;
      d_curr = d;
    }
    const double scale = std::sqrt(2.0 * i + 1.0);
    values[i] = scale * p;
    derivs[i] = scale * 2.0 * d;  // d/dy = 2 d/dt
  }
}

/// Stiffness of the orthonormal Legendre functions on (-1/2, 1/2):
/// int L_i' L_j' dy = 2 sqrt(2i+1) sqrt(2j+1) * q(q+1) with q = min(i,j),
/// nonzero only for i+j even (classic Legendre derivative overlap).
Eigen::MatrixXd legendre_stiffness(int n) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((i + j) % 2 != 0) {
        continue;
      }
      const double q = std::min(i, j);
      k(i, j) = 2.0 * std::sqrt(2.0 * i + 1.0) * std::sqrt(2.0 * j + 1.0) * q * (q + 1.0);
    }
  }
  return k;
}

int default_resolution(int count) {
  return std::max(48, 3 * count + 26);
}

}  // namespace

double ModalBasis::value(int mode, double y_hat) const {
  Eigen::VectorXd v, d;
  orthonormal_legendre(resolution, y_hat, v, d);
  return v.dot(coefficients.col(mode));
}

double ModalBasis::deriv(int mode, double y_hat) const {
  Eigen::VectorXd v, d;
  orthonormal_legendre(resolution, y_hat, v, d);
  return d.dot(coefficients.col(mode));
}

Eigen::VectorXd ModalBasis::values_at(double y_hat) const {
  Eigen::VectorXd v, d;
  orthonormal_legendre(resolution, y_hat, v, d);
  return coefficients.transpose() * v;
}

Eigen::VectorXd ModalBasis::derivs_at(double y_hat) const {
  Eigen::VectorXd v, d;
  orthonormal_legendre(resolution, y_hat, v, d);
  return coefficients.transpose() * d;
}

ModalBasis build_educated_basis(TransverseBc bc, int count, const QuadratureGrid& quad,
                                double nu_ref, double rho, int resolution) {
  if (count < 1) {
    throw std::invalid_argument("build_educated_basis: need count >= 1");
  }
  if (bc == TransverseBc::robin) {
    if (!(nu_ref > 0.0)) {
      throw std::invalid_argument("build_educated_basis: robin requires nu_ref > 0");
    }
    if (rho < 0.0) {
      throw std::invalid_argument("build_educated_basis: robin requires rho >= 0");
    }
  }
  const int n = resolution > 0 ? resolution : default_resolution(count);
  const int capacity = bc == TransverseBc::dirichlet ? n - 2 : n;
  if (count > capacity) {
    throw std::invalid_argument("build_educated_basis: count " + std::to_string(count) +
                                " exceeds the auxiliary resolution (capacity " +
                                std::to_string(capacity) + ")");
  }

  ModalBasis basis;
  basis.bc = bc;
  basis.count = count;
  basis.nu_ref = nu_ref;
  basis.rho = rho;
  basis.resolution = n;

  if (bc == TransverseBc::free_ends) {
    // The orthonormal Legendre functions themselves, lowest degrees first.
    basis.coefficients = Eigen::MatrixXd::Identity(n, count);
    basis.eigenvalues = Eigen::VectorXd::Zero(count);
  } else {
    const Eigen::MatrixXd stiffness = legendre_stiffness(n);
    // Wall traces of the expansion functions: L_i(1/2) = sqrt(2i+1),
    // L_i(-1/2) = (-1)^i sqrt(2i+1).
    Eigen::VectorXd trace_hi(n), trace_lo(n);
    for (int i = 0; i < n; ++i) {
      const double s = std::sqrt(2.0 * i + 1.0);
      trace_hi[i] = s;
      trace_lo[i] = (i % 2 == 0) ? s : -s;
    }

    if (bc == TransverseBc::dirichlet) {
      // Restrict the eigenproblem to the nullspace of the two wall traces;
      // the expansion basis is orthonormal, so the reduced problem stays a
      // standard symmetric one.
      Eigen::MatrixXd constraints(n, 2);
      constraints.col(0) = trace_hi;
      constraints.col(1) = trace_lo;
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints);
      const Eigen::MatrixXd q = qr.householderQ();
      const Eigen::MatrixXd z = q.rightCols(n - 2);
      const Eigen::MatrixXd reduced = z.transpose() * stiffness * z;
      const linalg::SymEigResult eig = linalg::sym_eig(reduced);
      basis.coefficients = z * eig.eigenvectors.leftCols(count);
      basis.eigenvalues = eig.eigenvalues.head(count);
    } else {
      // Robin: nu_ref dphi/dn + rho phi = 0 enters the weak form as a rank-2
      // boundary term (rho/nu_ref) [phi(1/2) v(1/2) + phi(-1/2) v(-1/2)].
      Eigen::MatrixXd robin = stiffness;
      robin += (rho / nu_ref) * (trace_hi * trace_hi.transpose() + trace_lo * trace_lo.transpose());
      const linalg::SymEigResult eig = linalg::sym_eig(robin);
      basis.coefficients = eig.eigenvectors.leftCols(count);
      basis.eigenvalues = eig.eigenvalues.head(count);
    }

    for (int k = 1; k < count; ++k) {
      if (!(basis.eigenvalues[k] > basis.eigenvalues[k - 1])) {
        throw BasisError("build_educated_basis: eigenvalues are not strictly increasing");
      }
    }
  }

  // Tabulate on the transverse quadrature nodes and fix the sign so every
  // mode is positive at the first node (deterministic snapshots).
  const int nt = quad.transverse_count();
  if (nt < 1) {
    throw std::invalid_argument("build_educated_basis: quadrature grid has no transverse nodes");
  }
  basis.values.resize(count, nt);
  basis.derivs.resize(count, nt);
  Eigen::VectorXd v, d;
  for (int t = 0; t < nt; ++t) {
    orthonormal_legendre(n, quad.transverse_nodes[t], v, d);
    basis.values.col(t) = basis.coefficients.transpose() * v;
    basis.derivs.col(t) = basis.coefficients.transpose() * d;
  }
  for (int k = 0; k < count; ++k) {
    if (basis.values(k, 0) < 0.0) {
      basis.coefficients.col(k) *= -1.0;
      basis.values.row(k) *= -1.0;
      basis.derivs.row(k) *= -1.0;
    }
  }
  return basis;
}

}  // namespace himod
