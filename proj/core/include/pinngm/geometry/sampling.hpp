/**
 * @file sampling.hpp
 * @brief Seeded spatial sampling around and on a body.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "pinngm/common/types.hpp"
#include "pinngm/geometry/shape.hpp"

namespace pinngm::geometry {

/// n points with radius uniform on [r_min*R, r_max*R] and isotropic direction.
/// r_min and r_max are given in units of R.
PointList sample_shell(double R, double r_min, double r_max, std::size_t n, std::uint64_t seed);

/// n points on the surface: facet drawn with probability proportional to its
/// area, then uniform inside the facet, then moved `offset` R along the
/// facet's outward normal. Zero-area facets are skipped.
PointList sample_surface(const ShapeModel& shape, std::size_t n, std::uint64_t seed,
                         double offset = 0.0);

/// One point per facet (the centroid), in facet order.
PointList facet_centroids(const ShapeModel& shape);

/// For each point, whether it lies strictly inside the body. Points on the
/// surface count as inside.
std::vector<bool> interior_flags(const ShapeModel& shape, const PointList& points);

/// Returns the points that are not inside the body.
PointList drop_interior(const ShapeModel& shape, const PointList& points);

/// Uniform random direction on the unit sphere.
template <typename Rng>
Vec3 random_direction(Rng& rng);

}  // namespace pinngm::geometry

#include <random>

namespace pinngm::geometry {

template <typename Rng>
Vec3 random_direction(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

}  // namespace pinngm::geometry
