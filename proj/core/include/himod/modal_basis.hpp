/// @file modal_basis.hpp
/// @brief Educated transverse modal bases on the reference section
///        (-1/2, 1/2): eigenfunctions of the transverse Laplacian under the
///        lateral boundary condition of the problem (Dirichlet or Robin), or
///        plain orthonormal Legendre polynomials for unconstrained fields.

#pragma once

#include "himod/geometry.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace himod {

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TransverseBc {
  dirichlet,  ///< phi(±1/2) = 0
  robin,      ///< nu_ref * dphi/dn + rho * phi = 0 at both walls
  free_ends,  ///< no boundary condition; orthonormal Legendre polynomials
};

/// A set of L2(-1/2,1/2)-orthonormal transverse modes, represented in an
/// orthonormal Legendre expansion and tabulated at the transverse quadrature
/// nodes. Modes are sorted by ascending eigenvalue of -phi'' = lambda phi
/// (for `free_ends` no eigenproblem is solved and eigenvalues are all zero).
/// Sign convention: each mode is positive at the first quadrature node.
struct ModalBasis {
  TransverseBc bc = TransverseBc::free_ends;
  int count = 0;
  double nu_ref = 0.0;
  double rho = 0.0;
  int resolution = 0;  ///< polynomial degree bound of the auxiliary eigensolve

  Eigen::VectorXd eigenvalues;  ///< count entries, strictly increasing (zeros for free_ends)
  Eigen::MatrixXd coefficients; ///< resolution x count, orthonormal-Legendre expansion per mode
  Eigen::MatrixXd values;       ///< count x n_transverse_nodes
  Eigen::MatrixXd derivs;       ///< count x n_transverse_nodes

  /// Exact evaluation from the Legendre expansion (any y_hat in [-1/2, 1/2]).
  double value(int mode, double y_hat) const;
  double deriv(int mode, double y_hat) const;

  /// All modes at once (cheaper than `count` single evaluations).
  Eigen::VectorXd values_at(double y_hat) const;
  Eigen::VectorXd derivs_at(double y_hat) const;
};

/// Builds the first `count` modes for the given boundary condition and
/// tabulates them on `quad`'s transverse nodes. Robin requires nu_ref > 0 and
/// rho >= 0 (rho = 0 degenerates to Neumann). `resolution` bounds the degree
/// of the auxiliary Legendre-Galerkin eigensolve; 0 picks a default that
/// resolves `count` modes well beyond the contract tolerances. Throws
/// std::invalid_argument when `count` exceeds what the resolution supports.
ModalBasis build_educated_basis(TransverseBc bc, int count, const QuadratureGrid& quad,
                                double nu_ref = 0.0, double rho = 0.0, int resolution = 0);

}  // namespace himod
