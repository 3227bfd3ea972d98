#include "pinngm/geometry/mesh_builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pinngm/common/error.hpp"

namespace pinngm::geometry {
namespace {

struct RawMesh {
  std::vector<Vec3> vertices;
  std::vector<Facet> facets;
};

RawMesh icosahedron_unit() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.facets = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
              {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
              {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
              {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

RawMesh unit_icosphere(int subdivisions) {
  if (subdivisions < 0) throw InvalidArgument("icosphere subdivisions must be >= 0");
  RawMesh m = icosahedron_unit();
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(m.vertices.size());
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Facet> next;
    next.reserve(m.facets.size() * 4);
    for (const auto& f : m.facets) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.facets = std::move(next);
  }
  return m;
}

}  // namespace

ShapeModel make_box(double hx, double hy, double hz, const LoadOptions& options) {
  if (!(hx > 0 && hy > 0 && hz > 0)) throw InvalidArgument("box half-extents must be positive");
  std::vector<Vec3> v = {{-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, hy, -hz}, {-hx, hy, -hz},
                         {-hx, -hy, hz},  {hx, -hy, hz},  {hx, hy, hz},  {-hx, hy, hz}};
  std::vector<Facet> f = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                          {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
  return ShapeModel::from_mesh(std::move(v), std::move(f), options);
}

ShapeModel make_icosahedron(double radius, const LoadOptions& options) {
  RawMesh m = icosahedron_unit();
  for (auto& v : m.vertices) v *= radius;
  return ShapeModel::from_mesh(std::move(m.vertices), std::move(m.facets), options);
}

ShapeModel make_icosphere(int subdivisions, double radius, const LoadOptions& options) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.vertices) v *= radius;
  return ShapeModel::from_mesh(std::move(m.vertices), std::move(m.facets), options);
}

ShapeModel make_ellipsoid(double a, double b, double c, int subdivisions,
                          const LoadOptions& options) {
  if (!(a > 0 && b > 0 && c > 0)) throw InvalidArgument("ellipsoid semi-axes must be positive");
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.vertices) v = Vec3(a * v.x(), b * v.y(), c * v.z());
  return ShapeModel::from_mesh(std::move(m.vertices), std::move(m.facets), options);
}

ShapeModel make_eros_like(int subdivisions, const LoadOptions& options) {
  constexpr double a = 16000.0;
  constexpr double b = 6500.0;
  constexpr double c = 5500.0;
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.vertices) {
    const double lon = std::atan2(v.y(), v.x());
    const double lat = std::asin(std::clamp(v.z(), -1.0, 1.0));
    // Low-order surface relief so the body is not a pure ellipsoid.
    const double relief = 1.0 + 0.06 * std::cos(3.0 * lon) * std::cos(lat) +
                          0.04 * std::sin(2.0 * lat) * std::sin(lon);
    Vec3 p(a * v.x(), b * v.y(), c * v.z());
    p *= relief;
    // Banana bend along y.
    p.y() += 0.18 * a * (p.x() / a) * (p.x() / a);
    v = p;
  }
  return ShapeModel::from_mesh(std::move(m.vertices), std::move(m.facets), options);
}

}  // namespace pinngm::geometry
