/// @file stokes.cpp

#include "himod/stokes.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace himod {

namespace {

/// Transverse-velocity dofs on the end fibers (axial dof 0 and N_h - 1,
/// every mode): the in/outflow condition prescribes u_y = 0 there.
std::vector<int> end_fiber_uy_dofs(const HiModSpaceStokes& space) {
  std::vector<int> dofs;
  const int last = space.velocity.fem.dof_count - 1;
  dofs.reserve(2 * space.velocity.modal.count);
  for (int k = 0; k < space.velocity.modal.count; ++k) {
    dofs.push_back(space.vdof(1, k, 0));
    dofs.push_back(space.vdof(1, k, last));
  }
  return dofs;
}

/// Transverse integral of each velocity mode against the fiber measure at
/// axial position x: int phi_k(y_hat) (dy/dy_hat) dy_hat.
Eigen::VectorXd fiber_mode_integrals(const HiModSpaceScalar& space, double x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.modal.count);
  for (int t = 0; t < space.quad.transverse_count(); ++t) {
    const MapSample ms = map_eval(space.map, x, space.quad.transverse_nodes[t]);
    out += (space.quad.transverse_weights[t] / ms.dpsi_dy) *
           space.modal.values_at(space.quad.transverse_nodes[t]);
  }
  return out;
}

}  // namespace

HiModSpaceStokes build_stokes_space(const DomainMap& map, const QuadratureGrid& quad,
                                    int pressure_modes) {
  if (pressure_modes < 1) {
    throw std::invalid_argument("build_stokes_space: need pressure_modes >= 1");
  }
  HiModSpaceStokes space;
  space.velocity = build_scalar_space(map, quad, 2, TransverseBc::dirichlet, pressure_modes + 2);
  space.pressure = build_scalar_space(map, quad, 1, TransverseBc::free_ends, pressure_modes);
  return space;
}

linalg::SparseMatrix SaddleAffineSystem::matrix_at(const Eigen::VectorXd& mu) const {
  linalg::SparseMatrix a = matrix_theta[0](mu) * matrices[0];
  for (size_t q = 1; q < matrices.size(); ++q) {
    a += matrix_theta[q](mu) * matrices[q];
  }
  return a;
}

Eigen::VectorXd SaddleAffineSystem::load_at(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dim_u);
  for (size_t q = 0; q < loads.size(); ++q) {
    f += load_theta[q](mu) * loads[q];
  }
  return f;
}

linalg::SparseMatrix SaddleAffineSystem::saddle_at(const Eigen::VectorXd& mu) const {
  const linalg::SparseMatrix a = matrix_at(mu);
  std::vector<linalg::Triplet> triplets;
  triplets.reserve(a.nonZeros() + 2 * divergence.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (linalg::SparseMatrix::InnerIterator it(a, k); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < divergence.outerSize(); ++k) {
    for (linalg::SparseMatrix::InnerIterator it(divergence, k); it; ++it) {
      triplets.emplace_back(dim_u + it.row(), it.col(), -it.value());
      triplets.emplace_back(it.col(), dim_u + it.row(), -it.value());
    }
  }
  linalg::SparseMatrix saddle(dim_u + dim_p, dim_u + dim_p);
  saddle.setFromTriplets(triplets.begin(), triplets.end());
  return saddle;
}

SaddleAffineSystem assemble_stokes(const HiModSpaceStokes& space, const StokesProblemSpec& spec) {
  const HiModSpaceScalar& vel = space.velocity;
  const HiModSpaceScalar& pre = space.pressure;
  const QuadratureGrid& quad = vel.quad;
  const int mu_modes = vel.modal.count;
  const int mp_modes = pre.modal.count;
  const int nloc_u = vel.fem.local_count();
  const int nloc_p = pre.fem.local_count();
  const int nu_fun = mu_modes * nloc_u;  // per velocity component
  const int np_fun = mp_modes * nloc_p;
  const Eigen::Index dim_u = space.velocity_dim();
  const Eigen::Index dim_p = space.pressure_dim();

  std::vector<char> fixed(dim_u, 0);
  const std::vector<int> constrained = end_fiber_uy_dofs(space);
  for (int d : constrained) {
    fixed[d] = 1;
  }

  std::vector<linalg::Triplet> a_t, b_t;
  a_t.reserve(static_cast<size_t>(quad.elements) * 4 * nu_fun * nu_fun);
  b_t.reserve(static_cast<size_t>(quad.elements) * 2 * np_fun * nu_fun);

  Eigen::VectorXd load_fx = Eigen::VectorXd::Zero(dim_u);
  Eigen::VectorXd load_fy = Eigen::VectorXd::Zero(dim_u);

  Eigen::MatrixXd axx(nu_fun, nu_fun), axy(nu_fun, nu_fun), ayx(nu_fun, nu_fun), ayy(nu_fun, nu_fun);
  Eigen::MatrixXd bx(np_fun, nu_fun), by(np_fun, nu_fun);
  Eigen::VectorXd unit_load(nu_fun);
  std::vector<double> ux(nu_fun), uy(nu_fun), uv(nu_fun), pq(np_fun);

  for (int e = 0; e < quad.elements; ++e) {
    axx.setZero();
    axy.setZero();
    ayx.setZero();
    ayy.setZero();
    bx.setZero();
    by.setZero();
    unit_load.setZero();

    for (int q = 0; q < quad.axial_per_element; ++q) {
      const double x = quad.axial_node(e, q);
      const double wx = quad.axial_weight(e, q);
      for (int t = 0; t < quad.transverse_count(); ++t) {
        const MapSample ms = map_eval(vel.map, x, quad.transverse_nodes[t]);
        const double w = wx * quad.transverse_weights[t] / ms.dpsi_dy;
        for (int k = 0; k < mu_modes; ++k) {
          const double pv = vel.modal.values(k, t);
          const double pd = vel.modal.derivs(k, t);
          for (int a = 0; a < nloc_u; ++a) {
            const double tv = vel.fem.value_at(e, q, a);
            const double td = vel.fem.deriv_at(e, q, a);
            const int idx = k * nloc_u + a;
            ux[idx] = td * pv + tv * pd * ms.dpsi_dx;
            uy[idx] = tv * pd * ms.dpsi_dy;
            uv[idx] = tv * pv;
          }
        }
        for (int l = 0; l < mp_modes; ++l) {
          const double pv = pre.modal.values(l, t);
          for (int b = 0; b < nloc_p; ++b) {
            pq[l * nloc_p + b] = pre.fem.value_at(e, q, b) * pv;
          }
        }
        // 2 D(u):D(v) expanded per component pairing; the shear part couples
        // the two velocity components even on the identity map.
        for (int r = 0; r < nu_fun; ++r) {
          const double wux = w * ux[r];
          const double wuy = w * uy[r];
          const double wuv = w * uv[r];
          unit_load[r] += wuv;
          for (int c = 0; c < nu_fun; ++c) {
            axx(r, c) += 2.0 * wux * ux[c] + wuy * uy[c];
            ayy(r, c) += 2.0 * wuy * uy[c] + wux * ux[c];
            axy(r, c) += wuy * ux[c];
            ayx(r, c) += wux * uy[c];
          }
        }
        for (int r = 0; r < np_fun; ++r) {
          const double wq = w * pq[r];
          for (int c = 0; c < nu_fun; ++c) {
            bx(r, c) += wq * ux[c];
            by(r, c) += wq * uy[c];
          }
        }
      }
    }

    // Scatter. Velocity rows/cols: component-major global indices.
    for (int k = 0; k < mu_modes; ++k) {
      for (int a = 0; a < nloc_u; ++a) {
        const int gi = vel.fem.global_dof(e, a);
        const int row_x = space.vdof(0, k, gi);
        const int row_y = space.vdof(1, k, gi);
        const int idx_r = k * nloc_u + a;
        load_fx[row_x] += unit_load[idx_r];
        load_fy[row_y] += unit_load[idx_r];
        for (int l = 0; l < mu_modes; ++l) {
          for (int b = 0; b < nloc_u; ++b) {
            const int gj = vel.fem.global_dof(e, b);
            const int col_x = space.vdof(0, l, gj);
            const int col_y = space.vdof(1, l, gj);
            const int idx_c = l * nloc_u + b;
            if (!fixed[row_x] && !fixed[col_x]) {
              a_t.emplace_back(row_x, col_x, axx(idx_r, idx_c));
            }
            if (!fixed[row_x] && !fixed[col_y]) {
              a_t.emplace_back(row_x, col_y, axy(idx_r, idx_c));
            }
            if (!fixed[row_y] && !fixed[col_x]) {
              a_t.emplace_back(row_y, col_x, ayx(idx_r, idx_c));
            }
            if (!fixed[row_y] && !fixed[col_y]) {
              a_t.emplace_back(row_y, col_y, ayy(idx_r, idx_c));
            }
          }
        }
      }
    }
    for (int l = 0; l < mp_modes; ++l) {
      for (int b = 0; b < nloc_p; ++b) {
        const int row = pre.dof(l, pre.fem.global_dof(e, b));
        const int idx_r = l * nloc_p + b;
        for (int k = 0; k < mu_modes; ++k) {
          for (int a = 0; a < nloc_u; ++a) {
            const int gj = vel.fem.global_dof(e, a);
            const int idx_c = k * nloc_u + a;
            const int col_x = space.vdof(0, k, gj);
            const int col_y = space.vdof(1, k, gj);
            if (!fixed[col_x]) {
              b_t.emplace_back(row, col_x, bx(idx_r, idx_c));
            }
            if (!fixed[col_y]) {
              b_t.emplace_back(row, col_y, by(idx_r, idx_c));
            }
          }
        }
      }
    }
  }

  // Natural in/outflow data: C n . v on the end fibers reduces to an axial
  // trace of the x-component (only the boundary axial dof is active there).
  Eigen::VectorXd load_cin = Eigen::VectorXd::Zero(dim_u);
  Eigen::VectorXd load_cout = Eigen::VectorXd::Zero(dim_u);
  const Eigen::VectorXd fiber_in = fiber_mode_integrals(vel, 0.0);
  const Eigen::VectorXd fiber_out = fiber_mode_integrals(vel, vel.map.length);
  const int last_axial = vel.fem.dof_count - 1;
  for (int k = 0; k < mu_modes; ++k) {
    load_cin[space.vdof(0, k, 0)] = fiber_in[k];
    load_cout[space.vdof(0, k, last_axial)] = fiber_out[k];
  }

  for (Eigen::VectorXd* load : {&load_fx, &load_fy, &load_cin, &load_cout}) {
    for (int d : constrained) {
      (*load)[d] = 0.0;
    }
  }
  for (int d : constrained) {
    a_t.emplace_back(d, d, 1.0);
  }

  SaddleAffineSystem sys;
  sys.dim_u = dim_u;
  sys.dim_p = dim_p;
  sys.parameter_dim = spec.parameter_dim;
  sys.matrices.resize(1);
  sys.matrices[0] = linalg::SparseMatrix(dim_u, dim_u);
  sys.matrices[0].setFromTriplets(a_t.begin(), a_t.end());
  sys.matrix_theta = {spec.nu};
  sys.divergence = linalg::SparseMatrix(dim_p, dim_u);
  sys.divergence.setFromTriplets(b_t.begin(), b_t.end());
  sys.loads = {std::move(load_fx), std::move(load_fy), std::move(load_cin), std::move(load_cout)};
  sys.load_theta = {spec.force_x, spec.force_y, spec.inflow, spec.outflow};
  sys.constrained_velocity = constrained;
  return sys;
}

StokesSolution solve_stokes(const SaddleAffineSystem& affine, const Eigen::VectorXd& mu) {
  Eigen::VectorXd rhs(affine.dim_u + affine.dim_p);
  rhs.head(affine.dim_u) = affine.load_at(mu);
  rhs.tail(affine.dim_p).setZero();
  const linalg::SparseOperator op(affine.saddle_at(mu));
  const Eigen::VectorXd solution = op.solve(rhs);
  return {solution.head(affine.dim_u), solution.tail(affine.dim_p)};
}

InnerProduct stokes_velocity_inner(const HiModSpaceStokes& space, InnerProduct::Norm tag) {
  const linalg::SparseMatrix scalar = assemble_norm_matrix(space.velocity, tag);
  const Eigen::Index dim = space.velocity.dim();
  std::vector<linalg::Triplet> triplets;
  triplets.reserve(2 * scalar.nonZeros());
  for (int comp = 0; comp < 2; ++comp) {
    const Eigen::Index offset = comp * dim;
    for (int k = 0; k < scalar.outerSize(); ++k) {
      for (linalg::SparseMatrix::InnerIterator it(scalar, k); it; ++it) {
        triplets.emplace_back(offset + it.row(), offset + it.col(), it.value());
      }
    }
  }
  linalg::SparseMatrix x(2 * dim, 2 * dim);
  x.setFromTriplets(triplets.begin(), triplets.end());
  x = constrain_matrix(x, end_fiber_uy_dofs(space), /*unit_diagonal=*/true);
  return InnerProduct(tag, std::move(x));
}

InnerProduct stokes_pressure_inner(const HiModSpaceStokes& space, InnerProduct::Norm tag) {
  return inner_product(space.pressure, tag);
}

Eigen::VectorXd solve_supremizer(const InnerProduct& velocity_inner,
                                 const linalg::SparseMatrix& divergence,
                                 const Eigen::VectorXd& pressure) {
  if (pressure.size() != divergence.rows()) {
    throw std::invalid_argument("solve_supremizer: pressure size mismatch");
  }
  const Eigen::VectorXd pairing = divergence.transpose() * pressure;
  return velocity_inner.solve(pairing);
}

double infsup_constant_dense(const Eigen::MatrixXd& divergence, const Eigen::MatrixXd& velocity_gram,
                             const Eigen::MatrixXd& pressure_gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(velocity_gram);
  if (llt.info() != Eigen::Success) {
    throw linalg::SolverError("infsup_constant_dense: velocity Gram matrix is not SPD");
  }
  const Eigen::MatrixXd z = llt.solve(divergence.transpose());
  Eigen::MatrixXd schur = divergence * z;
  schur = 0.5 * (schur + schur.transpose()).eval();
  const linalg::SymEigResult eig = linalg::gen_sym_eig(schur, pressure_gram);
  const double lambda_min = eig.eigenvalues[0];
  const double lambda_max = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (lambda_min < -1e-10 * std::max(lambda_max, 1.0)) {
    throw linalg::SolverError("infsup_constant_dense: negative Schur eigenvalue " +
                              std::to_string(lambda_min) + " indicates a broken formulation");
  }
  return std::sqrt(std::max(lambda_min, 0.0));
}

double infsup_constant(const linalg::SparseMatrix& divergence, const InnerProduct& velocity_inner,
                       const InnerProduct& pressure_inner) {
  const Eigen::MatrixXd bt = Eigen::MatrixXd(divergence).transpose();
  const Eigen::MatrixXd z = velocity_inner.solve(bt);
  Eigen::MatrixXd schur = divergence * z;
  schur = 0.5 * (schur + schur.transpose()).eval();
  const Eigen::MatrixXd xp = Eigen::MatrixXd(pressure_inner.matrix());
  const linalg::SymEigResult eig = linalg::gen_sym_eig(schur, xp);
  const double lambda_min = eig.eigenvalues[0];
  const double lambda_max = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (lambda_min < -1e-10 * std::max(lambda_max, 1.0)) {
    throw linalg::SolverError("infsup_constant: negative Schur eigenvalue " +
                              std::to_string(lambda_min) + " indicates a broken formulation");
  }
  return std::sqrt(std::max(lambda_min, 0.0));
}

double infsup_himod(const SaddleAffineSystem& affine, const InnerProduct& velocity_inner,
                    const InnerProduct& pressure_inner) {
  return infsup_constant(affine.divergence, velocity_inner, pressure_inner);
}

}  // namespace himod
