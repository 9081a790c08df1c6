/// @file geometry.hpp
/// @brief Channel geometry: closed-form fiber maps between the physical
///        transverse section and the reference section (-1/2, 1/2), and
///        tensorized Gauss quadrature over the reference slab.

#pragma once

#include <stdexcept>
#include <vector>

namespace himod {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MapKind {
  identity,                   ///< psi_x(y) = y
  sinusoidal_additive,        ///< psi_x(y) = y - amplitude * sin(frequency x + phase)
  sinusoidal_multiplicative,  ///< psi_x(y) = y / g(x), g(x) = 1 + amplitude * (2/width) * sin(frequency x + phase)
};

/// Closed-form map psi_x : gamma_x -> (-1/2, 1/2) collapsing each transverse
/// fiber of the channel onto the reference section. `length` is the extent
/// of the supporting segment (0, L); the remaining fields parametrize the
/// wall deformation and are ignored by kinds that do not use them.
struct DomainMap {
  MapKind kind = MapKind::identity;
  double length = 1.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double width = 1.0;
};

/// Map data at one point: the physical transverse coordinate attached to the
/// reference coordinate y_hat, and the spatial derivatives of psi evaluated
/// at that physical point. d(psi)/dy is the transverse Jacobian entering
/// every quadrature weight; d(psi)/dx carries the wall-deformation coupling
/// into axial derivatives via the chain rule.
struct MapSample {
  double y_phys = 0.0;
  double dpsi_dx = 0.0;
  double dpsi_dy = 1.0;
};

/// Evaluates the fiber map at axial coordinate x and reference coordinate
/// y_hat in [-1/2, 1/2]. Throws GeometryError if the fiber degenerates
/// (non-positive transverse Jacobian).
MapSample map_eval(const DomainMap& map, double x, double y_hat);

/// Forward application psi_x(y) -> y_hat for a physical point.
double map_forward(const DomainMap& map, double x, double y_phys);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensorized quadrature grid over (0, L) x (-1/2, 1/2): a per-element Gauss
/// rule along the axis and a composite Gauss rule across the reference
/// section. Axial weights carry the element size (they sum to L); transverse
/// weights sum to 1. Nodes are ascending within each element and across the
/// section.
struct QuadratureGrid {
  int elements = 0;
  double length = 0.0;
  int axial_per_element = 0;
  std::vector<double> axial_nodes;
  std::vector<double> axial_weights;
  std::vector<double> transverse_nodes;
  std::vector<double> transverse_weights;

  double element_size() const { return length / elements; }
  int axial_count() const { return static_cast<int>(axial_nodes.size()); }
  int transverse_count() const { return static_cast<int>(transverse_nodes.size()); }
  double axial_node(int element, int q) const { return axial_nodes[element * axial_per_element + q]; }
  double axial_weight(int element, int q) const { return axial_weights[element * axial_per_element + q]; }
};

/// Builds the tensor quadrature. `transverse_order` points are placed in each
/// of `transverse_panels` equal panels of the reference section; panels keep
/// the rule accurate for the oscillatory products of high transverse modes.
QuadratureGrid build_quadrature(int elements, double length, int axial_order,
                                int transverse_order, int transverse_panels = 8);

}  // namespace himod
