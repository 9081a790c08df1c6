/// @file adr.hpp
/// @brief Hierarchically reduced discretization of the parametrized
///        advection-diffusion-reaction problem on a deformed channel: a 1D
///        finite element space along the axis tensorized with an educated
///        transverse modal basis, assembled into a parameter-affine system.

#pragma once

#include "himod/affine.hpp"
#include "himod/fem1d.hpp"
#include "himod/geometry.hpp"
#include "himod/modal_basis.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace himod {

/// Scalar tensor space: coefficients are ordered mode-major, i.e. dof(k, i) =
/// k * N_h + i holds all axial coefficients of mode k contiguously.
struct HiModSpaceScalar {
  DomainMap map;
  QuadratureGrid quad;
  Fem1DSpace fem;
  ModalBasis modal;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(modal.count) * fem.dof_count; }
  int dof(int mode, int axial) const { return mode * fem.dof_count + axial; }
};

/// Builds mesh tabulation and modal basis over a shared quadrature grid.
HiModSpaceScalar build_scalar_space(const DomainMap& map, const QuadratureGrid& quad, int degree,
                                    TransverseBc bc, int modes, double nu_ref = 0.0,
                                    double rho = 0.0);

/// Weighted characteristic function of the ellipse
///   coef_x (x - center_x)^2 + coef_y (y - center_y)^2 < threshold.
struct EllipseForcing {
  double weight = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double coef_x = 1.0;
  double coef_y = 1.0;
  double threshold = 1.0;
};

/// Data of the scalar problem
///   -div(nu grad u) + b . grad u + sigma u = f   in the channel,
/// with Dirichlet inflow, Neumann outflow and lateral Robin condition
/// nu du/dn + rho u = robin_data. The coefficient entries are affine slots
/// (fixed constants or positions in the parameter vector, default layout
/// mu = [nu, b_x, b_y, sigma]).
struct AdrProblemSpec {
  Theta nu = Theta::parameter(0);
  Theta b_x = Theta::parameter(1);
  Theta b_y = Theta::parameter(2);
  Theta sigma = Theta::parameter(3);
  double rho = 0.0;
  std::vector<EllipseForcing> forcing;
  double forcing_constant = 0.0;
  double dirichlet_inflow = 0.0;  ///< only the homogeneous case is supported
  double neumann_outflow = 0.0;
  double robin_data = 0.0;
  int parameter_dim = 4;
};

/// Dofs carrying the essential inflow condition (axial dof 0, every mode).
std::vector<int> inflow_dofs(const HiModSpaceScalar& space);

/// Assembles the affine decomposition with 5 matrix terms (diffusion,
/// axial advection, transverse advection, reaction, Robin wall term with
/// constant coefficient rho) and one aggregated load term. All physical
/// gradients go through the fiber map's chain rule; the lateral Robin term
/// uses the flat-wall measure. Inflow dofs are eliminated (see AffineSystem).
AffineSystem assemble_adr(const HiModSpaceScalar& space, const AdrProblemSpec& spec);

/// Unconstrained scalar norm matrix over the physical channel: L2 mass or
/// H1 = mass + (physical) stiffness, by the same tensor quadrature as the
/// operator blocks.
linalg::SparseMatrix assemble_norm_matrix(const HiModSpaceScalar& space, InnerProduct::Norm tag);

/// Assembles the L2 or H1 inner-product matrix of the space by the same
/// tensor quadrature. `constrained` dofs get zeroed rows/columns and a unit
/// diagonal so the matrix stays SPD on the active subspace.
InnerProduct inner_product(const HiModSpaceScalar& space, InnerProduct::Norm tag,
                           const std::vector<int>& constrained = {});

/// Point evaluation u(x, y) = sum_k sum_i c_{k,i} theta_i(x) phi_k(psi_x(y)).
/// Throws std::out_of_range for points outside the channel.
Eigen::VectorXd evaluate_field(const HiModSpaceScalar& space, const Eigen::VectorXd& coefficients,
                               const std::vector<std::pair<double, double>>& points);

}  // namespace himod
