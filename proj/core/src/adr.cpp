/// @file adr.cpp

#include "himod/adr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace himod {

namespace {

/// Per-element volume contributions of the tensor-product space: diffusion
/// (physical gradients), axial/transverse advection, reaction, and the local
/// load of a unit constant forcing. Local tensor functions are indexed
/// mode-major: idx = mode * nloc + local_axial.
struct ElementBlocks {
  Eigen::MatrixXd diff, advx, advy, reac;
  Eigen::VectorXd unit_load;
};

void sweep_volume(const HiModSpaceScalar& space,
                  const std::function<void(int, const ElementBlocks&)>& emit) {
  const QuadratureGrid& quad = space.quad;
  const Fem1DSpace& fem = space.fem;
  const ModalBasis& modal = space.modal;
  const int m = modal.count;
  const int nloc = fem.local_count();
  const int nfun = m * nloc;
  const int nt = quad.transverse_count();

  ElementBlocks blocks;
  std::vector<double> ux(nfun), uy(nfun), uv(nfun);

  for (int e = 0; e < quad.elements; ++e) {
    blocks.diff = Eigen::MatrixXd::Zero(nfun, nfun);
    blocks.advx = Eigen::MatrixXd::Zero(nfun, nfun);
    blocks.advy = Eigen::MatrixXd::Zero(nfun, nfun);
    blocks.reac = Eigen::MatrixXd::Zero(nfun, nfun);
    blocks.unit_load = Eigen::VectorXd::Zero(nfun);

    for (int q = 0; q < quad.axial_per_element; ++q) {
      const double x = quad.axial_node(e, q);
      const double wx = quad.axial_weight(e, q);
      for (int t = 0; t < nt; ++t) {
        const MapSample ms = map_eval(space.map, x, quad.transverse_nodes[t]);
        const double w = wx * quad.transverse_weights[t] / ms.dpsi_dy;
        for (int k = 0; k < m; ++k) {
          const double pv = modal.values(k, t);
          const double pd = modal.derivs(k, t);
          for (int a = 0; a < nloc; ++a) {
            const double tv = fem.value_at(e, q, a);
            const double td = fem.deriv_at(e, q, a);
            const int idx = k * nloc + a;
            ux[idx] = td * pv + tv * pd * ms.dpsi_dx;
            uy[idx] = tv * pd * ms.dpsi_dy;
            uv[idx] = tv * pv;
          }
        }
        for (int r = 0; r < nfun; ++r) {
          const double wuxr = w * ux[r];
          const double wuyr = w * uy[r];
          const double wuvr = w * uv[r];
          blocks.unit_load[r] += wuvr;
          for (int c = 0; c < nfun; ++c) {
            blocks.diff(r, c) += wuxr * ux[c] + wuyr * uy[c];
            blocks.advx(r, c) += wuvr * ux[c];
            blocks.advy(r, c) += wuvr * uy[c];
            blocks.reac(r, c) += wuvr * uv[c];
          }
        }
      }
    }
    emit(e, blocks);
  }
}

void scatter_block(const HiModSpaceScalar& space, int element, const Eigen::MatrixXd& local,
                   const std::vector<char>& fixed, std::vector<linalg::Triplet>& out) {
  const int m = space.modal.count;
  const int nloc = space.fem.local_count();
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < nloc; ++i) {
      const int row = space.dof(k, space.fem.global_dof(element, i));
      if (fixed[row]) {
        continue;
      }
      for (int l = 0; l < m; ++l) {
        for (int j = 0; j < nloc; ++j) {
          const int col = space.dof(l, space.fem.global_dof(element, j));
          if (fixed[col]) {
            continue;
          }
          const double v = local(k * nloc + i, l * nloc + j);
          if (v != 0.0) {
            out.emplace_back(row, col, v);
          }
        }
      }
    }
  }
}

struct IntervalRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

IntervalRule interval_gauss(int n, double a, double b) {
  std::vector<double> ref_nodes, ref_weights;
  gauss_legendre(n, ref_nodes, ref_weights);
  IntervalRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * ref_nodes[i];
    rule.weights[i] = half * ref_weights[i];
  }
  return rule;
}

/// Accumulates int_E theta_i(x) phi_k(psi_x(y)) dy dx for one ellipse E. The
/// axial variable is substituted x = cx + X sin(t) so the sqrt-shaped cut at
/// the ellipse ends becomes analytic, then each axial node integrates the
/// modal functions over the mapped transverse chord.
void accumulate_ellipse_load(const HiModSpaceScalar& space, const EllipseForcing& ellipse,
                             Eigen::VectorXd& load) {
  if (!(ellipse.coef_x > 0.0) || !(ellipse.coef_y > 0.0) || !(ellipse.threshold > 0.0)) {
    throw std::invalid_argument("EllipseForcing: coef_x, coef_y, threshold must be positive");
  }
  constexpr int kAxialPoints = 16;
  constexpr int kTransversePoints = 12;

  const double extent = std::sqrt(ellipse.threshold / ellipse.coef_x);
  const double h = space.fem.element_size();
  for (int e = 0; e < space.fem.elements; ++e) {
    const double lo = std::max(e * h, ellipse.center_x - extent);
    const double hi = std::min((e + 1) * h, ellipse.center_x + extent);
    if (!(lo < hi)) {
      continue;
    }
    const double t_lo = std::asin(std::clamp((lo - ellipse.center_x) / extent, -1.0, 1.0));
    const double t_hi = std::asin(std::clamp((hi - ellipse.center_x) / extent, -1.0, 1.0));
    const IntervalRule axial = interval_gauss(kAxialPoints, t_lo, t_hi);
    for (int q = 0; q < kAxialPoints; ++q) {
      const double x = ellipse.center_x + extent * std::sin(axial.nodes[q]);
      const double wq = axial.weights[q] * extent * std::cos(axial.nodes[q]);
      const double span_sq =
          (ellipse.threshold - ellipse.coef_x * (x - ellipse.center_x) * (x - ellipse.center_x)) /
          ellipse.coef_y;
      if (!(span_sq > 0.0)) {
        continue;
      }
      const double span = std::sqrt(span_sq);
      double ref_lo = map_forward(space.map, x, ellipse.center_y - span);
      double ref_hi = map_forward(space.map, x, ellipse.center_y + span);
      ref_lo = std::max(ref_lo, -0.5);
      ref_hi = std::min(ref_hi, 0.5);
      if (!(ref_lo < ref_hi)) {
        continue;
      }
      // Modal chord integrals int phi_k(y_hat) * dy/dy_hat dy_hat.
      const IntervalRule chord = interval_gauss(kTransversePoints, ref_lo, ref_hi);
      Eigen::VectorXd modal_integral = Eigen::VectorXd::Zero(space.modal.count);
      for (int s = 0; s < kTransversePoints; ++s) {
        const MapSample ms = map_eval(space.map, x, chord.nodes[s]);
        modal_integral += (chord.weights[s] / ms.dpsi_dy) * space.modal.values_at(chord.nodes[s]);
      }
      int element = 0;
      std::array<double, 3> values{};
      std::array<double, 3> derivs{};
      space.fem.evaluate(x, element, values, derivs);
      for (int k = 0; k < space.modal.count; ++k) {
        for (int a = 0; a < space.fem.local_count(); ++a) {
          const int dof = space.dof(k, space.fem.global_dof(element, a));
          load[dof] += ellipse.weight * wq * values[a] * modal_integral[k];
        }
      }
    }
  }
}

}  // namespace

HiModSpaceScalar build_scalar_space(const DomainMap& map, const QuadratureGrid& quad, int degree,
                                    TransverseBc bc, int modes, double nu_ref, double rho) {
  HiModSpaceScalar space;
  space.map = map;
  space.quad = quad;
  space.fem = build_fem1d(map.length, quad.elements, degree, quad);
  space.modal = build_educated_basis(bc, modes, quad, nu_ref, rho);
  return space;
}

std::vector<int> inflow_dofs(const HiModSpaceScalar& space) {
  std::vector<int> dofs;
  dofs.reserve(space.modal.count);
  for (int k = 0; k < space.modal.count; ++k) {
    dofs.push_back(space.dof(k, 0));
  }
  return dofs;
}

AffineSystem assemble_adr(const HiModSpaceScalar& space, const AdrProblemSpec& spec) {
  if (spec.dirichlet_inflow != 0.0) {
    throw std::invalid_argument("assemble_adr: only homogeneous inflow data is supported");
  }
  if (spec.rho < 0.0) {
    throw std::invalid_argument("assemble_adr: rho must be >= 0");
  }
  const int m = space.modal.count;
  const int nloc = space.fem.local_count();
  const Eigen::Index dim = space.dim();

  std::vector<char> fixed(dim, 0);
  for (int d : inflow_dofs(space)) {
    fixed[d] = 1;
  }

  // Wall traces for the Robin boundary block (flat-wall measure; the educated
  // basis already encodes the boundary condition at reference walls).
  const Eigen::VectorXd wall_hi = space.modal.values_at(0.5);
  const Eigen::VectorXd wall_lo = space.modal.values_at(-0.5);
  const Eigen::MatrixXd wall_pair =
      wall_hi * wall_hi.transpose() + wall_lo * wall_lo.transpose();

  std::vector<linalg::Triplet> diff_t, advx_t, advy_t, reac_t, robin_t;
  const size_t guess = static_cast<size_t>(space.quad.elements) * m * nloc * m * nloc;
  diff_t.reserve(guess);
  advx_t.reserve(guess);
  advy_t.reserve(guess);
  reac_t.reserve(guess);

  Eigen::VectorXd load = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd robin_local(m * nloc, m * nloc);

  sweep_volume(space, [&](int e, const ElementBlocks& blocks) {
    scatter_block(space, e, blocks.diff, fixed, diff_t);
    scatter_block(space, e, blocks.advx, fixed, advx_t);
    scatter_block(space, e, blocks.advy, fixed, advy_t);
    scatter_block(space, e, blocks.reac, fixed, reac_t);

    // Lateral Robin wall term for this element (axial rule only).
    robin_local.setZero();
    for (int q = 0; q < space.quad.axial_per_element; ++q) {
      const double wx = space.quad.axial_weight(e, q);
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nloc; ++i) {
          const double tv_i = space.fem.value_at(e, q, i);
          for (int l = 0; l < m; ++l) {
            for (int j = 0; j < nloc; ++j) {
              robin_local(k * nloc + i, l * nloc + j) +=
                  wx * tv_i * space.fem.value_at(e, q, j) * wall_pair(k, l);
            }
          }
        }
      }
      if (spec.robin_data != 0.0) {
        for (int k = 0; k < m; ++k) {
          for (int i = 0; i < nloc; ++i) {
            const int dof = space.dof(k, space.fem.global_dof(e, i));
            load[dof] += spec.robin_data * space.quad.axial_weight(e, q) *
                         space.fem.value_at(e, q, i) * (wall_hi[k] + wall_lo[k]);
          }
        }
      }
    }
    scatter_block(space, e, robin_local, fixed, robin_t);

    if (spec.forcing_constant != 0.0) {
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nloc; ++i) {
          const int dof = space.dof(k, space.fem.global_dof(e, i));
          load[dof] += spec.forcing_constant * blocks.unit_load[k * nloc + i];
        }
      }
    }
  });

  for (const EllipseForcing& ellipse : spec.forcing) {
    accumulate_ellipse_load(space, ellipse, load);
  }

  // Neumann outflow data enters through the fiber at x = L, where only the
  // last axial dof of each mode is active.
  if (spec.neumann_outflow != 0.0) {
    const double x_end = space.map.length;
    for (int t = 0; t < space.quad.transverse_count(); ++t) {
      const MapSample ms = map_eval(space.map, x_end, space.quad.transverse_nodes[t]);
      const Eigen::VectorXd vals = space.modal.values_at(space.quad.transverse_nodes[t]);
      for (int k = 0; k < m; ++k) {
        load[space.dof(k, space.fem.dof_count - 1)] +=
            spec.neumann_outflow * space.quad.transverse_weights[t] * vals[k] / ms.dpsi_dy;
      }
    }
  }

  for (Eigen::Index d = 0; d < dim; ++d) {
    if (fixed[d]) {
      load[d] = 0.0;
    }
  }
  // The eliminated dofs carry a unit diagonal inside the diffusion block,
  // whose coefficient (nu) stays positive over the domain.
  for (Eigen::Index d = 0; d < dim; ++d) {
    if (fixed[d]) {
      diff_t.emplace_back(d, d, 1.0);
    }
  }

  AffineSystem sys;
  sys.dim = dim;
  sys.parameter_dim = spec.parameter_dim;
  sys.matrices.resize(5);
  sys.matrices[0] = linalg::SparseMatrix(dim, dim);
  sys.matrices[0].setFromTriplets(diff_t.begin(), diff_t.end());
  sys.matrices[1] = linalg::SparseMatrix(dim, dim);
  sys.matrices[1].setFromTriplets(advx_t.begin(), advx_t.end());
  sys.matrices[2] = linalg::SparseMatrix(dim, dim);
  sys.matrices[2].setFromTriplets(advy_t.begin(), advy_t.end());
  sys.matrices[3] = linalg::SparseMatrix(dim, dim);
  sys.matrices[3].setFromTriplets(reac_t.begin(), reac_t.end());
  sys.matrices[4] = linalg::SparseMatrix(dim, dim);
  sys.matrices[4].setFromTriplets(robin_t.begin(), robin_t.end());
  sys.matrix_theta = {spec.nu, spec.b_x, spec.b_y, spec.sigma, Theta::constant(spec.rho)};
  sys.loads = {std::move(load)};
  sys.load_theta = {Theta::constant(1.0)};
  sys.constrained_dofs = inflow_dofs(space);
  return sys;
}

linalg::SparseMatrix assemble_norm_matrix(const HiModSpaceScalar& space, InnerProduct::Norm tag) {
  if (tag == InnerProduct::Norm::identity) {
    linalg::SparseMatrix eye(space.dim(), space.dim());
    eye.setIdentity();
    return eye;
  }
  const std::vector<char> fixed(space.dim(), 0);
  std::vector<linalg::Triplet> triplets;
  sweep_volume(space, [&](int e, const ElementBlocks& blocks) {
    if (tag == InnerProduct::Norm::l2) {
      scatter_block(space, e, blocks.reac, fixed, triplets);
    } else {
      scatter_block(space, e, Eigen::MatrixXd(blocks.reac + blocks.diff), fixed, triplets);
    }
  });
  linalg::SparseMatrix x(space.dim(), space.dim());
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

InnerProduct inner_product(const HiModSpaceScalar& space, InnerProduct::Norm tag,
                           const std::vector<int>& constrained) {
  if (tag == InnerProduct::Norm::identity) {
    return InnerProduct::identity_norm(space.dim());
  }
  linalg::SparseMatrix x = assemble_norm_matrix(space, tag);
  if (!constrained.empty()) {
    x = constrain_matrix(x, constrained, /*unit_diagonal=*/true);
  }
  return InnerProduct(tag, std::move(x));
}

Eigen::VectorXd evaluate_field(const HiModSpaceScalar& space, const Eigen::VectorXd& coefficients,
                               const std::vector<std::pair<double, double>>& points) {
  if (coefficients.size() != space.dim()) {
    throw std::invalid_argument("evaluate_field: coefficient vector size mismatch");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  int element = 0;
  std::array<double, 3> values{};
  std::array<double, 3> derivs{};
  for (size_t p = 0; p < points.size(); ++p) {
    const double x = points[p].first;
    const double y = points[p].second;
    const double y_hat = map_forward(space.map, x, y);
    if (y_hat < -0.5 - 1e-12 || y_hat > 0.5 + 1e-12) {
      throw std::out_of_range("evaluate_field: point (" + std::to_string(x) + ", " +
                              std::to_string(y) + ") is outside the channel");
    }
    space.fem.evaluate(x, element, values, derivs);
    const Eigen::VectorXd modal_values = space.modal.values_at(std::clamp(y_hat, -0.5, 0.5));
    double sum = 0.0;
    for (int k = 0; k < space.modal.count; ++k) {
      double axial = 0.0;
      for (int a = 0; a < space.fem.local_count(); ++a) {
        axial += values[a] * coefficients[space.dof(k, space.fem.global_dof(element, a))];
      }
      sum += axial * modal_values[k];
    }
    out[p] = sum;
  }
  return out;
}

}  // namespace himod
