#include "pinngm/geometry/sampling.hpp"

#include <cmath>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"

namespace pinngm::geometry {

PointList sample_shell(double R, double r_min, double r_max, std::size_t n, std::uint64_t seed) {
  if (!(R > 0.0)) throw InvalidArgument("sample_shell: R must be positive");
  if (!(r_min >= 0.0 && r_min < r_max)) {
    throw InvalidArgument("sample_shell: need 0 <= r_min < r_max");
  }
  if (n == 0) throw InvalidArgument("sample_shell: n must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(r_min * R, r_max * R);
  PointList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius(rng);
    out.push_back(r * random_direction(rng));
  }
  return out;
}

PointList sample_surface(const ShapeModel& shape, std::size_t n, std::uint64_t seed,
                         double offset) {
  if (n == 0) throw InvalidArgument("sample_surface: n must be positive");
  std::vector<double> weights = shape.facet_areas();
  std::size_t skipped = 0;
  for (double& w : weights) {
    if (!(w > 0.0)) {
      w = 0.0;
      ++skipped;
    }
  }
  if (skipped > 0) log::warn("sample_surface: skipped ", skipped, " zero-area facets");

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& v = shape.vertices();
  const double h = offset * shape.radius();
  PointList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = pick(rng);
    const auto& f = shape.facets()[k];
    const double s = std::sqrt(unit(rng));
    const double t = unit(rng);
    out.push_back((1.0 - s) * v[f[0]] + s * (1.0 - t) * v[f[1]] + s * t * v[f[2]] +
                  h * shape.facet_normals()[k]);
  }
  return out;
}

PointList facet_centroids(const ShapeModel& shape) {
  PointList out;
  out.reserve(shape.facet_count());
  for (std::size_t f = 0; f < shape.facet_count(); ++f) out.push_back(shape.facet_centroid(f));
  return out;
}

std::vector<bool> interior_flags(const ShapeModel& shape, const PointList& points) {
  std::vector<bool> flags(points.size(), false);
  const double R = shape.radius();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].norm() > R) continue;
    try {
      flags[i] = contains(shape, points[i]);
    } catch (const SingularityError&) {
      flags[i] = true;
    }
  }
  return flags;
}

PointList drop_interior(const ShapeModel& shape, const PointList& points) {
  const auto flags = interior_flags(shape, points);
  PointList out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!flags[i]) out.push_back(points[i]);
  }
  return out;
}

}  // namespace pinngm::geometry
