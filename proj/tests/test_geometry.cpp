/// @file test_geometry.cpp
/// @brief Fiber maps and tensor quadrature against independently derived
///        closed forms, finite differences, and exactness identities.

#include "himod/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using himod::build_quadrature;
using himod::DomainMap;
using himod::GeometryError;
using himod::map_eval;
using himod::map_forward;
using himod::MapKind;
using himod::MapSample;
using himod::QuadratureGrid;

namespace {

DomainMap additive_channel() {
  DomainMap map;
  map.kind = MapKind::sinusoidal_additive;
  map.length = 4.0;
  map.amplitude = 0.2;
  map.frequency = 3.0 * M_PI / 8.0;
  map.phase = 0.0;
  return map;
}

DomainMap multiplicative_channel() {
  DomainMap map;
  map.kind = MapKind::sinusoidal_multiplicative;
  map.length = 6.0;
  map.amplitude = 0.4;
  map.frequency = M_PI;
  map.phase = 0.5 * M_PI;
  map.width = 1.0;
  return map;
}

std::vector<DomainMap> all_maps() {
  DomainMap identity;
  identity.length = 4.0;
  return {identity, additive_channel(), multiplicative_channel()};
}

}  // namespace

TEST(MapEvalTest, IdentityMapIsTrivial) {
  DomainMap map;
  map.length = 2.0;
  const MapSample ms = map_eval(map, 1.3, 0.27);
  EXPECT_DOUBLE_EQ(ms.y_phys, 0.27);
  EXPECT_DOUBLE_EQ(ms.dpsi_dx, 0.0);
  EXPECT_DOUBLE_EQ(ms.dpsi_dy, 1.0);
  EXPECT_DOUBLE_EQ(map_forward(map, 1.3, 0.27), 0.27);
}

TEST(MapEvalTest, AdditiveMapVanishesAtPhaseZero) {
  // At x = 0 the sinusoidal shift is zero: the section is undeformed.
  const DomainMap map = additive_channel();
  const MapSample ms = map_eval(map, 0.0, 0.3);
  EXPECT_NEAR(ms.y_phys, 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(ms.dpsi_dy, 1.0);
  EXPECT_NEAR(ms.dpsi_dx, -map.amplitude * map.frequency, 1e-15);
  EXPECT_NEAR(map_forward(map, 0.0, 0.3), 0.3, 1e-15);
}

TEST(MapEvalTest, MatchesIndependentClosedForms) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (const DomainMap& map : all_maps()) {
    for (int trial = 0; trial < 50; ++trial) {
      const double x = ux(rng) * map.length;
      const double y_hat = ux(rng) - 0.5;
      const MapSample ms = map_eval(map, x, y_hat);
      const oracle::MapDerivs md = oracle::map_at_physical(map, x, ms.y_phys);
      EXPECT_NEAR(md.y_hat, y_hat, 1e-13);
      EXPECT_NEAR(ms.dpsi_dx, md.dpsi_dx, 1e-13);
      EXPECT_NEAR(ms.dpsi_dy, md.dpsi_dy, 1e-13);
    }
  }
}

TEST(MapEvalTest, RoundTripThroughForwardMap) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (const DomainMap& map : all_maps()) {
    for (int trial = 0; trial < 50; ++trial) {
      const double x = ux(rng) * map.length;
      const double y_hat = ux(rng) - 0.5;
      const MapSample ms = map_eval(map, x, y_hat);
      EXPECT_NEAR(map_forward(map, x, ms.y_phys), y_hat, 1e-12);
    }
  }
}

TEST(MapEvalTest, AxialDerivativeMatchesFiniteDifference) {
  // dpsi/dx at a fixed *physical* point: move x, keep y_phys fixed.
  const double delta = 1e-6;
  for (const DomainMap& map : all_maps()) {
    for (double x : {0.7, 1.9, 3.4}) {
      for (double y_hat : {-0.35, 0.1, 0.45}) {
        const MapSample ms = map_eval(map, x, y_hat);
        const double fwd = map_forward(map, x + delta, ms.y_phys);
        const double bwd = map_forward(map, x - delta, ms.y_phys);
        const double fd = (fwd - bwd) / (2.0 * delta);
        EXPECT_NEAR(ms.dpsi_dx, fd, 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST(MapEvalTest, TransverseDerivativeMatchesFiniteDifference) {
  const double delta = 1e-6;
  for (const DomainMap& map : all_maps()) {
    for (double x : {0.7, 1.9, 3.4}) {
      const MapSample ms = map_eval(map, x, 0.2);
      const double fwd = map_forward(map, x, ms.y_phys + delta);
      const double bwd = map_forward(map, x, ms.y_phys - delta);
      EXPECT_NEAR(ms.dpsi_dy, (fwd - bwd) / (2.0 * delta), 1e-6);
    }
  }
}

TEST(MapEvalTest, ChainRuleReproducesPhysicalGradient) {
  // w(x, y) = sin(1.3 x + 0.4) cos(2.1 psi_x(y)); compare the chain-rule
  // gradient against central differences in physical coordinates.
  const double delta = 1e-6;
  for (const DomainMap& map : all_maps()) {
    for (double x : {0.9, 2.3}) {
      for (double y_hat : {-0.3, 0.25}) {
        const MapSample ms = map_eval(map, x, y_hat);
        const double y = ms.y_phys;
        const auto w = [&](double px, double py) {
          return std::sin(1.3 * px + 0.4) * std::cos(2.1 * map_forward(map, px, py));
        };
        const double wx_chain = 1.3 * std::cos(1.3 * x + 0.4) * std::cos(2.1 * y_hat) +
                                std::sin(1.3 * x + 0.4) * (-2.1 * std::sin(2.1 * y_hat)) *
                                    ms.dpsi_dx;
        const double wy_chain =
            std::sin(1.3 * x + 0.4) * (-2.1 * std::sin(2.1 * y_hat)) * ms.dpsi_dy;
        EXPECT_NEAR(wx_chain, (w(x + delta, y) - w(x - delta, y)) / (2.0 * delta), 1e-5);
        EXPECT_NEAR(wy_chain, (w(x, y + delta) - w(x, y - delta)) / (2.0 * delta), 1e-5);
      }
    }
  }
}

TEST(MapEvalTest, DegenerateFiberThrows) {
  DomainMap map = multiplicative_channel();
  map.amplitude = 0.51;  // g(x) = 1 + 1.02 sin(pi x + pi/2) touches below zero
  bool degenerate_seen = false;
  for (double x = 0.0; x <= map.length; x += 0.05) {
    try {
      map_eval(map, x, 0.25);
    } catch (const GeometryError&) {
      degenerate_seen = true;
    }
  }
  EXPECT_TRUE(degenerate_seen);
}

TEST(MapEvalTest, TransverseJacobianPositiveOnQuadratureGrid) {
  const QuadratureGrid quad = build_quadrature(20, 4.0, 3, 4);
  for (const DomainMap& map : all_maps()) {
    for (int q = 0; q < quad.axial_count(); ++q) {
      for (int t = 0; t < quad.transverse_count(); ++t) {
        const MapSample ms = map_eval(map, quad.axial_nodes[q], quad.transverse_nodes[t]);
        EXPECT_GT(ms.dpsi_dy, 0.0);
      }
    }
  }
}

TEST(GaussLegendreTest, TwoPointRuleIsClosedForm) {
  std::vector<double> nodes;
  std::vector<double> weights;
  himod::gauss_legendre(2, nodes, weights);
  EXPECT_NEAR(nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(weights[0], 1.0, 1e-15);
  EXPECT_NEAR(weights[1], 1.0, 1e-15);
}

TEST(GaussLegendreTest, MatchesJacobiMatrixRule) {
  for (int n : {1, 3, 5, 8, 16, 32}) {
    std::vector<double> nodes;
    std::vector<double> weights;
    himod::gauss_legendre(n, nodes, weights);
    const oracle::Rule rule = oracle::gauss(n);
    ASSERT_EQ(nodes.size(), rule.points.size());
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(nodes[i], rule.points[i], 1e-13);
      EXPECT_NEAR(weights[i], rule.weights[i], 1e-13);
    }
  }
}

TEST(GaussLegendreTest, RejectsNonPositiveCount) {
  std::vector<double> nodes;
  std::vector<double> weights;
  EXPECT_THROW(himod::gauss_legendre(0, nodes, weights), GeometryError);
}

TEST(QuadratureGridTest, SingleElementTwoPointAxialRule) {
  const QuadratureGrid quad = build_quadrature(1, 1.0, 2, 2, 1);
  ASSERT_EQ(quad.axial_count(), 2);
  EXPECT_NEAR(quad.axial_nodes[0], 0.5 * (1.0 - 1.0 / std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(quad.axial_nodes[1], 0.5 * (1.0 + 1.0 / std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(quad.axial_weights[0], 0.5, 1e-15);
  EXPECT_NEAR(quad.axial_weights[1], 0.5, 1e-15);
}

TEST(QuadratureGridTest, WeightSumsMatchMeasures) {
  const QuadratureGrid quad = build_quadrature(13, 3.7, 3, 5);
  double ax = 0.0;
  for (double w : quad.axial_weights) {
    ax += w;
  }
  double tr = 0.0;
  for (double w : quad.transverse_weights) {
    tr += w;
  }
  EXPECT_NEAR(ax, 3.7, 1e-13);
  EXPECT_NEAR(tr, 1.0, 1e-14);
}

TEST(QuadratureGridTest, TransverseRuleIntegratesQuadraticExactly) {
  const QuadratureGrid quad = build_quadrature(1, 1.0, 2, 2, 1);
  double acc = 0.0;
  for (int t = 0; t < quad.transverse_count(); ++t) {
    acc += quad.transverse_weights[t] * quad.transverse_nodes[t] * quad.transverse_nodes[t];
  }
  EXPECT_NEAR(acc, 1.0 / 12.0, 1e-15);
}

TEST(QuadratureGridTest, TransverseRuleIntegratesSquaredCosine) {
  const QuadratureGrid quad = build_quadrature(1, 1.0, 2, 8, 1);
  double acc = 0.0;
  for (int t = 0; t < quad.transverse_count(); ++t) {
    const double c = std::cos(M_PI * quad.transverse_nodes[t]);
    acc += quad.transverse_weights[t] * c * c;
  }
  EXPECT_NEAR(acc, 0.5, 1e-10);
}

TEST(QuadratureGridTest, TransversePolynomialExactness) {
  // order-n panels integrate monomials up to degree 2n - 1 exactly.
  const int order = 4;
  const QuadratureGrid quad = build_quadrature(2, 1.0, 2, order, 3);
  for (int d = 0; d <= 2 * order - 1; ++d) {
    double acc = 0.0;
    for (int t = 0; t < quad.transverse_count(); ++t) {
      acc += quad.transverse_weights[t] * std::pow(quad.transverse_nodes[t], d);
    }
    const double exact = (d % 2 == 1) ? 0.0 : std::pow(0.5, d) / (d + 1);
    EXPECT_NEAR(acc, exact, 1e-14);
  }
}

TEST(QuadratureGridTest, NodesAscendAndStayInsideDomain) {
  const QuadratureGrid quad = build_quadrature(7, 2.0, 3, 4, 2);
  for (int q = 1; q < quad.axial_count(); ++q) {
    EXPECT_GT(quad.axial_nodes[q], quad.axial_nodes[q - 1]);
  }
  for (int t = 1; t < quad.transverse_count(); ++t) {
    EXPECT_GT(quad.transverse_nodes[t], quad.transverse_nodes[t - 1]);
  }
  EXPECT_GT(quad.axial_nodes.front(), 0.0);
  EXPECT_LT(quad.axial_nodes.back(), 2.0);
  EXPECT_GT(quad.transverse_nodes.front(), -0.5);
  EXPECT_LT(quad.transverse_nodes.back(), 0.5);
}

TEST(QuadratureGridTest, ElementAccessorsIndexTheFlatArrays) {
  const QuadratureGrid quad = build_quadrature(5, 2.5, 3, 4);
  EXPECT_EQ(quad.axial_count(), 15);
  EXPECT_DOUBLE_EQ(quad.axial_node(2, 1), quad.axial_nodes[2 * 3 + 1]);
  EXPECT_DOUBLE_EQ(quad.axial_weight(4, 2), quad.axial_weights[4 * 3 + 2]);
  EXPECT_DOUBLE_EQ(quad.element_size(), 0.5);
}

TEST(QuadratureGridTest, RejectsInvalidArguments) {
  EXPECT_THROW(build_quadrature(0, 1.0, 2, 2), GeometryError);
  EXPECT_THROW(build_quadrature(4, -1.0, 2, 2), GeometryError);
  EXPECT_THROW(build_quadrature(4, 1.0, 0, 2), GeometryError);
  EXPECT_THROW(build_quadrature(4, 1.0, 2, 0), GeometryError);
  EXPECT_THROW(build_quadrature(4, 1.0, 2, 2, 0), GeometryError);
}
