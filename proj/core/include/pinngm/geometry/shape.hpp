/**
 * @file shape.hpp
 * @brief Closed triangulated surface describing a body's geometry.
 */
#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pinngm/common/types.hpp"

namespace pinngm::geometry {

using Facet = std::array<int, 3>;

/// Undirected edge shared by exactly two facets. `facet_a` traverses the edge
/// as v0 -> v1, `facet_b` as v1 -> v0.
struct Edge {
  int v0 = 0;
  int v1 = 0;
  int facet_a = 0;
  int facet_b = 0;
};

struct LoadOptions {
  /// Translate the mesh so the constant-density center of mass is the origin.
  bool recenter = true;
  /// Rotate into the principal-inertia frame (x = longest axis).
  bool principal_axes = true;
};

/**
 * Immutable, validated triangle mesh.
 *
 * Invariants enforced at construction: every facet index is in range, every
 * edge is shared by exactly two facets with opposite traversal (consistent
 * winding), and the signed volume is positive (outward normals).
 */
class ShapeModel {
 public:
  /// Validates and optionally recenters/rotates. Throws GeometryError.
  static ShapeModel from_mesh(std::vector<Vec3> vertices, std::vector<Facet> facets,
                              const LoadOptions& options = {});

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vec3>& facet_normals() const noexcept { return normals_; }
  const std::vector<double>& facet_areas() const noexcept { return areas_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t facet_count() const noexcept { return facets_.size(); }

  double volume() const noexcept { return volume_; }
  double surface_area() const noexcept;
  /// Circumscribing (Brillouin) radius: max vertex distance from the origin.
  double radius() const noexcept { return radius_; }

  Vec3 facet_centroid(std::size_t f) const;
  Vec3 bbox_min() const;
  Vec3 bbox_max() const;

  /// Returns a copy with all vertices multiplied by `factor`.
  ShapeModel scaled(double factor) const;

 private:
  ShapeModel() = default;
  void build_caches();

  std::vector<Vec3> vertices_;
  std::vector<Facet> facets_;
  std::vector<Edge> edges_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  double volume_ = 0.0;
  double radius_ = 0.0;
};

/// Parses the `v x y z` / `f i j k` subset of Wavefront OBJ (1-based indices;
/// `f` tokens may carry `/vt/vn` suffixes). Other records are ignored.
ShapeModel load_shape(std::istream& obj_text, const LoadOptions& options = {});
ShapeModel load_shape_file(const std::string& path, const LoadOptions& options = {});

void write_obj(std::ostream& os, const ShapeModel& shape);
void write_obj_file(const std::string& path, const ShapeModel& shape);

/// Signed volume sum of origin-apex tetrahedra.
double signed_volume(const std::vector<Vec3>& vertices, const std::vector<Facet>& facets);

struct BodyProperties {
  double mu = 0.0;
  double radius = 0.0;
  /// Principal half-extents, a >= b >= c.
  double semi_a = 0.0;
  double semi_b = 0.0;
  double semi_c = 0.0;
  double eccentricity = 0.0;
};

BodyProperties body_properties(const ShapeModel& shape, double mu);

/// Solid angle subtended by triangle (a, b, c) as seen from p; signed so an
/// outward-oriented closed surface sums to 4*pi for interior points.
double facet_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p);

/// Total signed solid angle of the surface seen from p.
double winding_solid_angle(const ShapeModel& shape, const Vec3& p);

/// Point-in-body test from the solid-angle sum. Throws SingularityError when p
/// lies on the surface (within 1e-12 R of a facet).
bool contains(const ShapeModel& shape, const Vec3& p);

}  // namespace pinngm::geometry
