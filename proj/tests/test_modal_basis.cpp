/// @file test_modal_basis.cpp
/// @brief Transverse modal bases: closed-form eigenfunctions, characteristic
///        equations solved by an independent bisection, orthonormality and
///        boundary-condition residuals.

#include "himod/modal_basis.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using himod::BasisError;
using himod::build_educated_basis;
using himod::build_quadrature;
using himod::ModalBasis;
using himod::QuadratureGrid;
using himod::TransverseBc;

namespace {

QuadratureGrid section_quad() { return build_quadrature(4, 1.0, 3, 6, 8); }

double quad_inner(const QuadratureGrid& quad, const ModalBasis& basis, int j, int k) {
  double acc = 0.0;
  for (int t = 0; t < quad.transverse_count(); ++t) {
    acc += quad.transverse_weights[t] * basis.values(j, t) * basis.values(k, t);
  }
  return acc;
}

}  // namespace

TEST(ModalBasisTest, DirichletModesAreScaledSines) {
  // -phi'' = lambda phi with phi(±1/2) = 0 has the closed form
  // phi_k(y) = sqrt(2) sin(k pi (y + 1/2)), lambda_k = (k pi)^2.
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::dirichlet, 3, quad);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uy(-0.5, 0.5);
  for (int k = 0; k < 3; ++k) {
    const double lambda = (k + 1) * M_PI * (k + 1) * M_PI;
    EXPECT_NEAR(basis.eigenvalues[k], lambda, 1e-8 * lambda);
    for (int trial = 0; trial < 40; ++trial) {
      const double y = uy(rng);
      const double exact = std::sqrt(2.0) * std::sin((k + 1) * M_PI * (y + 0.5));
      const double exact_deriv =
          std::sqrt(2.0) * (k + 1) * M_PI * std::cos((k + 1) * M_PI * (y + 0.5));
      // The eigensolver fixes each mode's sign at the first quadrature node;
      // compare against the closed form with that sign applied.
      const double sign = basis.values(k, 0) * std::sqrt(2.0) *
                                  std::sin((k + 1) * M_PI * (quad.transverse_nodes[0] + 0.5)) >
                              0.0
                          ? 1.0
                          : -1.0;
      EXPECT_NEAR(basis.value(k, y), sign * exact, 1e-8);
      EXPECT_NEAR(basis.deriv(k, y), sign * exact_deriv, 1e-7);
    }
  }
}

TEST(ModalBasisTest, FreeModesAreOrthonormalLegendre) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::free_ends, 2, quad);
  // Mode 0 is the constant 1; mode 1 is ±sqrt(12) y with the sign fixed by
  // positivity at the first (negative) quadrature node.
  EXPECT_NEAR(basis.value(0, 0.37), 1.0, 1e-12);
  EXPECT_NEAR(basis.value(1, 0.25), -std::sqrt(12.0) * 0.25, 1e-12);
  EXPECT_NEAR(basis.deriv(1, -0.1), -std::sqrt(12.0), 1e-12);
  EXPECT_GT(basis.value(1, quad.transverse_nodes[0]), 0.0);
  EXPECT_DOUBLE_EQ(basis.eigenvalues[0], 0.0);
  EXPECT_DOUBLE_EQ(basis.eigenvalues[1], 0.0);
}

TEST(ModalBasisTest, RobinEigenvaluesMatchCharacteristicEquations) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::robin, 4, quad, 5.0, 1.0);
  const std::vector<double> expected = oracle::robin_eigenvalues(5.0, 1.0, 4);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(basis.eigenvalues[k], expected[k], 1e-6 * std::max(1.0, expected[k]));
  }
}

TEST(ModalBasisTest, QuadratureOrthonormalityForEveryBoundaryCondition) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis dirichlet = build_educated_basis(TransverseBc::dirichlet, 6, quad);
  const ModalBasis robin = build_educated_basis(TransverseBc::robin, 4, quad, 5.0, 1.0);
  const ModalBasis free_ends = build_educated_basis(TransverseBc::free_ends, 5, quad);
  for (const ModalBasis* basis : {&dirichlet, &robin, &free_ends}) {
    for (int j = 0; j < basis->count; ++j) {
      for (int k = 0; k < basis->count; ++k) {
        EXPECT_NEAR(quad_inner(quad, *basis, j, k), j == k ? 1.0 : 0.0, 1e-8);
      }
    }
  }
}

TEST(ModalBasisTest, DirichletTracesVanish) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::dirichlet, 6, quad);
  for (int k = 0; k < basis.count; ++k) {
    EXPECT_LE(std::abs(basis.value(k, -0.5)), 1e-8);
    EXPECT_LE(std::abs(basis.value(k, 0.5)), 1e-8);
  }
}

TEST(ModalBasisTest, RobinBoundaryResidualsVanish) {
  // nu phi'(y) n + rho phi(y) = 0 at y = ±1/2 with outward normals ∓/±1.
  const double nu = 5.0;
  const double rho = 1.0;
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::robin, 4, quad, nu, rho);
  for (int k = 0; k < basis.count; ++k) {
    double scale = 0.0;
    for (int t = 0; t < quad.transverse_count(); ++t) {
      scale = std::max(scale, std::abs(basis.values(k, t)));
    }
    const double lower = -nu * basis.deriv(k, -0.5) + rho * basis.value(k, -0.5);
    const double upper = nu * basis.deriv(k, 0.5) + rho * basis.value(k, 0.5);
    EXPECT_LE(std::abs(lower), 1e-6 * scale);
    EXPECT_LE(std::abs(upper), 1e-6 * scale);
  }
}

TEST(ModalBasisTest, EigenvaluesStrictlyIncrease) {
  const QuadratureGrid quad = section_quad();
  for (auto bc : {TransverseBc::dirichlet, TransverseBc::robin}) {
    const ModalBasis basis = bc == TransverseBc::robin
                                 ? build_educated_basis(bc, 8, quad, 5.0, 1.0)
                                 : build_educated_basis(bc, 8, quad);
    for (int k = 1; k < basis.count; ++k) {
      EXPECT_GT(basis.eigenvalues[k], basis.eigenvalues[k - 1]);
    }
  }
}

TEST(ModalBasisTest, ResolutionRefinementLeavesModesUnchanged) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis coarse = build_educated_basis(TransverseBc::robin, 6, quad, 5.0, 1.0, 44);
  const ModalBasis fine = build_educated_basis(TransverseBc::robin, 6, quad, 5.0, 1.0, 88);
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(coarse.eigenvalues[k], fine.eigenvalues[k],
                1e-6 * std::max(1.0, fine.eigenvalues[k]));
    for (double y : {-0.41, -0.13, 0.08, 0.33}) {
      EXPECT_NEAR(coarse.value(k, y), fine.value(k, y), 1e-6);
    }
  }
}

TEST(ModalBasisTest, SignConventionHoldsAtFirstQuadratureNode) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis dirichlet = build_educated_basis(TransverseBc::dirichlet, 6, quad);
  const ModalBasis robin = build_educated_basis(TransverseBc::robin, 5, quad, 5.0, 1.0);
  const ModalBasis free_ends = build_educated_basis(TransverseBc::free_ends, 5, quad);
  for (const ModalBasis* basis : {&dirichlet, &robin, &free_ends}) {
    for (int k = 0; k < basis->count; ++k) {
      EXPECT_GT(basis->values(k, 0), 0.0);
    }
  }
}

TEST(ModalBasisTest, TabulationMatchesExactEvaluation) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::robin, 5, quad, 5.0, 1.0);
  for (int k = 0; k < basis.count; ++k) {
    for (int t = 0; t < quad.transverse_count(); ++t) {
      EXPECT_NEAR(basis.values(k, t), basis.value(k, quad.transverse_nodes[t]), 1e-13);
      EXPECT_NEAR(basis.derivs(k, t), basis.deriv(k, quad.transverse_nodes[t]), 1e-12);
    }
  }
}

TEST(ModalBasisTest, BatchedEvaluationMatchesSingleMode) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::dirichlet, 5, quad);
  const Eigen::VectorXd values = basis.values_at(0.19);
  const Eigen::VectorXd derivs = basis.derivs_at(0.19);
  for (int k = 0; k < basis.count; ++k) {
    EXPECT_DOUBLE_EQ(values[k], basis.value(k, 0.19));
    EXPECT_DOUBLE_EQ(derivs[k], basis.deriv(k, 0.19));
  }
}

TEST(ModalBasisTest, DerivativeMatchesFiniteDifferenceOfValue) {
  const QuadratureGrid quad = section_quad();
  const ModalBasis basis = build_educated_basis(TransverseBc::robin, 4, quad, 5.0, 1.0);
  const double delta = 1e-6;
  for (int k = 0; k < basis.count; ++k) {
    for (double y : {-0.3, 0.0, 0.42}) {
      const double fd = (basis.value(k, y + delta) - basis.value(k, y - delta)) / (2.0 * delta);
      EXPECT_NEAR(basis.deriv(k, y), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(ModalBasisTest, RejectsInvalidRequests) {
  const QuadratureGrid quad = section_quad();
  EXPECT_THROW(build_educated_basis(TransverseBc::dirichlet, 0, quad), std::invalid_argument);
  EXPECT_THROW(build_educated_basis(TransverseBc::robin, 3, quad, 0.0, 1.0),
               std::invalid_argument);
  EXPECT_THROW(build_educated_basis(TransverseBc::robin, 3, quad, 5.0, -1.0),
               std::invalid_argument);
  // More modes than the auxiliary resolution can represent.
  EXPECT_THROW(build_educated_basis(TransverseBc::dirichlet, 30, quad, 0.0, 0.0, 16),
               std::invalid_argument);
}
