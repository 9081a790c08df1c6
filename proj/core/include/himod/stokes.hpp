/// @file stokes.hpp
/// @brief Hierarchically reduced Stokes flow in a deformed channel:
///        Taylor-Hood-style pairing of a P2-axial velocity space (no-slip
///        educated modes) with a P1-axial pressure space (free Legendre
///        modes), assembled in conservative strain-rate form into a
///        parameter-affine saddle-point system.

#pragma once

#include "himod/adr.hpp"
#include "himod/affine.hpp"

#include <Eigen/Dense>

namespace himod {

/// Velocity components share one scalar space (P2 axial, dirichlet modes);
/// the pressure space uses P1 axial elements and free modes. The mode
/// pairing m_u = m_p + 2 is enforced at construction. Velocity dofs are
/// component-major: dof(comp, k, i) = comp * m_u * N_hu + k * N_hu + i.
struct HiModSpaceStokes {
  HiModSpaceScalar velocity;
  HiModSpaceScalar pressure;

  Eigen::Index velocity_dim() const { return 2 * velocity.dim(); }
  Eigen::Index pressure_dim() const { return pressure.dim(); }
  int vdof(int component, int mode, int axial) const {
    return static_cast<int>(component * velocity.dim()) + velocity.dof(mode, axial);
  }
};

/// Builds both spaces over one quadrature grid; velocity gets
/// `pressure_modes + 2` educated dirichlet modes.
HiModSpaceStokes build_stokes_space(const DomainMap& map, const QuadratureGrid& quad,
                                    int pressure_modes);

/// Parameter layout mu = [nu, C_in, C_out, f_x, f_y]: viscosity, natural
/// inflow/outflow data (total-stress values C n on the end fibers), and a
/// constant body force.
struct StokesProblemSpec {
  Theta nu = Theta::parameter(0);
  Theta inflow = Theta::parameter(1);
  Theta outflow = Theta::parameter(2);
  Theta force_x = Theta::parameter(3);
  Theta force_y = Theta::parameter(4);
  int parameter_dim = 5;
};

/// Affine saddle-point system
///   [ A(mu)  -B^T ] [u]   [ f(mu) ]
///   [ -B      0   ] [p] = [   0   ]
/// with one velocity block (coefficient nu), the parameter-independent
/// divergence pairing B[q, u] = int q div(u), and four load terms ordered
/// (f_x, f_y, C_in, C_out). Constrained velocity dofs (transverse velocity
/// on the end fibers; walls are built into the modal basis) are eliminated
/// as in AffineSystem, with the unit diagonal carried by the nu-block.
struct SaddleAffineSystem {
  Eigen::Index dim_u = 0;
  Eigen::Index dim_p = 0;
  int parameter_dim = 5;
  std::vector<linalg::SparseMatrix> matrices;
  std::vector<Theta> matrix_theta;
  linalg::SparseMatrix divergence;
  std::vector<Eigen::VectorXd> loads;
  std::vector<Theta> load_theta;
  std::vector<int> constrained_velocity;

  linalg::SparseMatrix matrix_at(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd load_at(const Eigen::VectorXd& mu) const;

  /// Full symmetric saddle matrix of dimension dim_u + dim_p.
  linalg::SparseMatrix saddle_at(const Eigen::VectorXd& mu) const;
};

struct StokesSolution {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
};

SaddleAffineSystem assemble_stokes(const HiModSpaceStokes& space, const StokesProblemSpec& spec);

/// Direct solve of the full saddle system (relative residual <= 1e-10).
StokesSolution solve_stokes(const SaddleAffineSystem& affine, const Eigen::VectorXd& mu);

/// Vector-velocity inner product: block diagonal of the scalar norm matrix
/// on both components, with the end-fiber transverse-velocity constraints
/// eliminated (unit diagonal).
InnerProduct stokes_velocity_inner(const HiModSpaceStokes& space,
                                   InnerProduct::Norm tag = InnerProduct::Norm::h1);

/// Pressure inner product (no essential constraints).
InnerProduct stokes_pressure_inner(const HiModSpaceStokes& space,
                                   InnerProduct::Norm tag = InnerProduct::Norm::l2);

/// Supremizer of a pressure field: the velocity representer of the pairing,
/// X_u s = B^T p.
Eigen::VectorXd solve_supremizer(const InnerProduct& velocity_inner,
                                 const linalg::SparseMatrix& divergence,
                                 const Eigen::VectorXd& pressure);

/// Smallest generalized eigenvalue of the pressure Schur complement
/// B X_u^{-1} B^T q = lambda X_p q; returns beta = sqrt(lambda_min).
/// A significantly negative lambda_min indicates a broken formulation and
/// raises SolverError.
double infsup_constant(const linalg::SparseMatrix& divergence, const InnerProduct& velocity_inner,
                       const InnerProduct& pressure_inner);

/// Dense variant for reduced spaces: B_N (X_u,N)^{-1} B_N^T q = lambda X_p,N q.
double infsup_constant_dense(const Eigen::MatrixXd& divergence, const Eigen::MatrixXd& velocity_gram,
                             const Eigen::MatrixXd& pressure_gram);

/// Inf-sup constant of the assembled HiMod pair (parameter independent:
/// the pairing and the norms do not depend on mu).
double infsup_himod(const SaddleAffineSystem& affine, const InnerProduct& velocity_inner,
                    const InnerProduct& pressure_inner);

}  // namespace himod
