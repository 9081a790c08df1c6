/// @file fem1d.cpp

#include "himod/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace himod {

namespace {

/// Reference shape functions on t in [0, 1], ordered by node position.
void reference_shapes(int degree, double t, double* values, double* derivs) {
  if (degree == 1) {
    values[0] = 1.0 - t;
    values[1] = t;
    derivs[0] = -1.0;
    derivs[1] = 1.0;
  } else {
    values[0] = (1.0 - t) * (1.0 - 2.0 * t);
    values[1] = 4.0 * t * (1.0 - t);
    values[2] = t * (2.0 * t - 1.0);
    derivs[0] = 4.0 * t - 3.0;
    derivs[1] = 4.0 - 8.0 * t;
    derivs[2] = 4.0 * t - 1.0;
  }
}

}  // namespace

void Fem1DSpace::evaluate(double x, int& element, std::array<double, 3>& values,
                          std::array<double, 3>& derivs) const {
  if (x < -1e-12 || x > length * (1.0 + 1e-12)) {
    throw std::out_of_range("Fem1DSpace::evaluate: x = " + std::to_string(x) +
                            " outside [0, " + std::to_string(length) + "]");
  }
  const double h = element_size();
  element = std::clamp(static_cast<int>(std::floor(x / h)), 0, elements - 1);
  const double t = std::clamp((x - element * h) / h, 0.0, 1.0);
  reference_shapes(degree, t, values.data(), derivs.data());
  for (int a = 0; a < local_count(); ++a) {
    derivs[a] /= h;
  }
}

Fem1DSpace build_fem1d(double length, int elements, int degree, const QuadratureGrid& quad) {
  if (degree != 1 && degree != 2) {
    throw std::invalid_argument("build_fem1d: degree must be 1 or 2, got " + std::to_string(degree));
  }
  if (elements < 1 || !(length > 0.0)) {
    throw std::invalid_argument("build_fem1d: need elements >= 1 and positive length");
  }
  if (quad.elements != elements || std::abs(quad.length - length) > 1e-12 * length) {
    throw std::invalid_argument("build_fem1d: quadrature grid does not match the mesh");
  }

  Fem1DSpace space;
  space.length = length;
  space.elements = elements;
  space.degree = degree;
  space.dof_count = elements * degree + 1;
  space.quad_per_element = quad.axial_per_element;

  const int nloc = degree + 1;
  const double h = length / elements;
  space.shape_values.resize(static_cast<size_t>(quad.axial_count()) * nloc);
  space.shape_derivs.resize(static_cast<size_t>(quad.axial_count()) * nloc);

  double values[3];
  double derivs[3];
  for (int e = 0; e < elements; ++e) {
    for (int q = 0; q < quad.axial_per_element; ++q) {
      const double x = quad.axial_node(e, q);
      const double t = (x - e * h) / h;
      reference_shapes(degree, t, values, derivs);
      const size_t base = (static_cast<size_t>(e) * quad.axial_per_element + q) * nloc;
      for (int a = 0; a < nloc; ++a) {
        space.shape_values[base + a] = values[a];
        space.shape_derivs[base + a] = derivs[a] / h;
      }
    }
  }
  return space;
}

}  // namespace himod
