/// @file geometry.cpp

#include "himod/geometry.hpp"

#include <cmath>
#include <string>

namespace himod {

namespace {

double multiplicative_gauge(const DomainMap& map, double x, double* derivative) {
  const double arg = map.frequency * x + map.phase;
  const double scale = map.amplitude * 2.0 / map.width;
  if (derivative != nullptr) {
    *derivative = scale * map.frequency * std::cos(arg);
  }
  return 1.0 + scale * std::sin(arg);
}

}  // namespace

MapSample map_eval(const DomainMap& map, double x, double y_hat) {
  switch (map.kind) {
    case MapKind::identity:
      return {y_hat, 0.0, 1.0};
    case MapKind::sinusoidal_additive: {
      const double arg = map.frequency * x + map.phase;
      MapSample s;
      s.y_phys = y_hat + map.amplitude * std::sin(arg);
      s.dpsi_dx = -map.amplitude * map.frequency * std::cos(arg);
      s.dpsi_dy = 1.0;
      return s;
    }
    case MapKind::sinusoidal_multiplicative: {
      double dg = 0.0;
      const double g = multiplicative_gauge(map, x, &dg);
      if (!(g > 1e-12)) {
        throw GeometryError("map_eval: fiber width " + std::to_string(g) +
                            " is not positive at x = " + std::to_string(x));
      }
      MapSample s;
      s.y_phys = y_hat * g;
      s.dpsi_dx = -y_hat * dg / g;
      s.dpsi_dy = 1.0 / g;
      return s;
    }
  }
  throw GeometryError("map_eval: unknown map kind");
}

double map_forward(const DomainMap& map, double x, double y_phys) {
  switch (map.kind) {
    case MapKind::identity:
      return y_phys;
    case MapKind::sinusoidal_additive:
      return y_phys - map.amplitude * std::sin(map.frequency * x + map.phase);
    case MapKind::sinusoidal_multiplicative: {
      const double g = multiplicative_gauge(map, x, nullptr);
      if (!(g > 1e-12)) {
        throw GeometryError("map_forward: fiber width is not positive at x = " + std::to_string(x));
      }
      return y_phys / g;
    }
  }
  throw GeometryError("map_forward: unknown map kind");
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) {
    throw GeometryError("gauss_legendre: order must be positive");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on the Legendre polynomial, seeded with the Chebyshev
  // estimate; symmetric nodes are mirrored.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureGrid build_quadrature(int elements, double length, int axial_order,
                                int transverse_order, int transverse_panels) {
  if (elements < 1 || !(length > 0.0)) {
    throw GeometryError("build_quadrature: need elements >= 1 and positive length");
  }
  if (axial_order < 1 || transverse_order < 1 || transverse_panels < 1) {
    throw GeometryError("build_quadrature: quadrature orders must be positive");
  }

  QuadratureGrid grid;
  grid.elements = elements;
  grid.length = length;
  grid.axial_per_element = axial_order;

  std::vector<double> ref_nodes;
  std::vector<double> ref_weights;
  gauss_legendre(axial_order, ref_nodes, ref_weights);

  const double h = length / elements;
  grid.axial_nodes.reserve(static_cast<size_t>(elements) * axial_order);
  grid.axial_weights.reserve(static_cast<size_t>(elements) * axial_order);
  for (int e = 0; e < elements; ++e) {
    const double left = e * h;
    for (int q = 0; q < axial_order; ++q) {
      grid.axial_nodes.push_back(left + 0.5 * h * (ref_nodes[q] + 1.0));
      grid.axial_weights.push_back(0.5 * h * ref_weights[q]);
    }
  }

  gauss_legendre(transverse_order, ref_nodes, ref_weights);
  const double panel = 1.0 / transverse_panels;
  grid.transverse_nodes.reserve(static_cast<size_t>(transverse_panels) * transverse_order);
  grid.transverse_weights.reserve(static_cast<size_t>(transverse_panels) * transverse_order);
  for (int p = 0; p < transverse_panels; ++p) {
    const double left = -0.5 + p * panel;
    for (int q = 0; q < transverse_order; ++q) {
      grid.transverse_nodes.push_back(left + 0.5 * panel * (ref_nodes[q] + 1.0));
      grid.transverse_weights.push_back(0.5 * panel * ref_weights[q]);
    }
  }
  return grid;
}

}  // namespace himod
