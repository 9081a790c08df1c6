/// @file fem1d.hpp
/// @brief Uniform 1D Lagrange finite element spaces (P1/P2) along the channel
///        axis, tabulated at the axial quadrature nodes.

#pragma once

#include "himod/geometry.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace himod {

/// Nodal Lagrange space on a uniform mesh of (0, length). Global dofs are
/// numbered left to right (P2 interleaves vertex and midpoint nodes), so dof
/// 0 sits at x = 0 and dof `dof_count - 1` at x = length.
struct Fem1DSpace {
  double length = 0.0;
  int elements = 0;
  int degree = 1;
  int dof_count = 0;
  int quad_per_element = 0;

  /// Local basis values/derivatives at the axial quadrature nodes, indexed
  /// [(element * quad_per_element + q) * (degree + 1) + local].
  std::vector<double> shape_values;
  std::vector<double> shape_derivs;

  double element_size() const { return length / elements; }
  int local_count() const { return degree + 1; }
  int global_dof(int element, int local) const { return element * degree + local; }
  double node_coordinate(int dof) const { return dof * length / (elements * degree); }

  double value_at(int element, int q, int local) const {
    return shape_values[(element * quad_per_element + q) * (degree + 1) + local];
  }
  double deriv_at(int element, int q, int local) const {
    return shape_derivs[(element * quad_per_element + q) * (degree + 1) + local];
  }

  /// Locates x in the mesh and evaluates the local basis there. Values and
  /// derivatives are written to the first `degree + 1` slots.
  void evaluate(double x, int& element, std::array<double, 3>& values,
                std::array<double, 3>& derivs) const;
};

/// Builds the space and tabulates it on the grid's axial nodes. Requires
/// degree 1 or 2 and a grid built for the same element count and length.
Fem1DSpace build_fem1d(double length, int elements, int degree, const QuadratureGrid& quad);

}  // namespace himod
