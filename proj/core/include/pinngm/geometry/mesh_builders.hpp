/**
 * @file mesh_builders.hpp
 * @brief Procedural closed meshes: boxes, platonic solids, ellipsoids and a
 * coarse elongated asteroid.
 */
#pragma once

#include "pinngm/geometry/shape.hpp"

namespace pinngm::geometry {

/// Axis-aligned box with half-extents (hx, hy, hz), 8 vertices and 12 facets.
ShapeModel make_box(double hx, double hy, double hz, const LoadOptions& options = {});

/// Regular icosahedron with circumradius `radius`.
ShapeModel make_icosahedron(double radius = 1.0, const LoadOptions& options = {});

/// Icosahedron refined `subdivisions` times with vertices projected onto the
/// sphere: 20 * 4^subdivisions facets.
ShapeModel make_icosphere(int subdivisions, double radius = 1.0, const LoadOptions& options = {});

/// Icosphere stretched to semi-axes (a, b, c).
ShapeModel make_ellipsoid(double a, double b, double c, int subdivisions,
                          const LoadOptions& options = {});

/// Elongated, slightly bent body roughly the size of 433 Eros (semi-axes near
/// 16 x 6.5 x 5.5 km), in metres.
ShapeModel make_eros_like(int subdivisions = 3, const LoadOptions& options = {});

}  // namespace pinngm::geometry
