#include "pinngm/eval/metrics.hpp"

#include <cmath>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm/geometry/sampling.hpp"

namespace pinngm::eval {

ErrorStats percent_error_stats(const std::vector<Vec3>& truth,
                               const std::vector<Vec3>& predicted) {
  if (truth.size() != predicted.size()) {
    throw InvalidArgument("truth and prediction sizes differ");
  }
  ErrorStats s;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double n = truth[i].norm();
    if (n == 0.0) {
      ++s.excluded;
      continue;
    }
    double e = (truth[i] - predicted[i]).norm() / n * 100.0;
    if (!std::isfinite(e)) e = std::numeric_limits<double>::infinity();
    sum += e;
    sum_sq += e * e;
    s.max = std::max(s.max, e);
    ++s.used;
  }
  if (s.excluded > 0) {
    log::warn("percent error: ", s.excluded, " sample(s) with zero truth acceleration excluded");
  }
  if (s.used == 0) throw InvalidArgument("percent error needs at least one usable point");
  s.mean = sum / static_cast<double>(s.used);
  const double var = sum_sq / static_cast<double>(s.used) - s.mean * s.mean;
  s.stddev = std::sqrt(std::max(0.0, var));
  return s;
}

double percent_error(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                     const PointList& points) {
  if (points.empty()) throw InvalidArgument("percent error needs points");
  return percent_error_stats(truth.accelerations(points), model.accelerations(points)).mean;
}

PlaneGrid plane_grid(double R, const geometry::ShapeModel* shape, int n, double extent) {
  if (n < 2 || !(R > 0.0) || !(extent > 0.0)) throw InvalidArgument("bad plane grid");
  PlaneGrid g;
  g.candidates = 3 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  g.points.reserve(g.candidates);
  const double lo = -extent * R;
  const double h = 2.0 * extent * R / (n - 1);
  static constexpr int kAxes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int p = 0; p < 3; ++p) {
    PointList plane;
    plane.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Vec3 x = Vec3::Zero();
        x[kAxes[p][0]] = lo + i * h;
        x[kAxes[p][1]] = lo + j * h;
        plane.push_back(x);
      }
    }
    const std::size_t before = g.points.size();
    if (shape != nullptr) {
      const auto inside = geometry::interior_flags(*shape, plane);
      for (std::size_t k = 0; k < plane.size(); ++k) {
        if (!inside[k]) g.points.push_back(plane[k]);
      }
    } else {
      g.points.insert(g.points.end(), plane.begin(), plane.end());
    }
    g.kept[static_cast<std::size_t>(p)] = g.points.size() - before;
  }
  g.excluded_interior = g.candidates - g.points.size();
  return g;
}

AltitudeSets altitude_sets(double R, const geometry::ShapeModel* shape, std::uint64_t seed,
                           int per_unit) {
  if (!(R > 0.0) || per_unit < 1) throw InvalidArgument("bad altitude sampling");
  std::mt19937_64 rng(seed);
  auto band = [&](double r0, double r1) {
    const auto n = static_cast<std::size_t>(std::llround((r1 - r0) * per_unit));
    std::uniform_real_distribution<double> radius(r0 * R, r1 * R);
    PointList pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = radius(rng);
      pts.push_back(r * geometry::random_direction(rng));
    }
    return pts;
  };
  AltitudeSets s;
  s.interior = band(0.0, 1.0);
  s.exterior = band(1.0, 10.0);
  s.extrapolation = band(10.0, 100.0);
  if (shape != nullptr) {
    const std::size_t before = s.interior.size();
    s.interior = geometry::drop_interior(*shape, s.interior);
    s.excluded_interior = before - s.interior.size();
  }
  return s;
}

PointList surface_points(const geometry::ShapeModel& shape, double offset) {
  PointList pts;
  pts.reserve(shape.facet_count());
  const double h = offset * shape.radius();
  for (std::size_t f = 0; f < shape.facet_count(); ++f) {
    pts.push_back(shape.facet_centroid(f) + h * shape.facet_normals()[f]);
  }
  return pts;
}

double planes_metric(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                     double R, const geometry::ShapeModel* shape) {
  return percent_error(truth, model, plane_grid(R, shape).points);
}

GeneralizationResult generalization_metric(const analytic::GravityModel& truth,
                                           const analytic::GravityModel& model, double R,
                                           const geometry::ShapeModel* shape,
                                           std::uint64_t seed) {
  const AltitudeSets s = altitude_sets(R, shape, seed);
  GeneralizationResult g;
  g.interior_pct = s.interior.empty() ? 0.0 : percent_error(truth, model, s.interior);
  g.exterior_pct = percent_error(truth, model, s.exterior);
  g.extrapolation_pct = percent_error(truth, model, s.extrapolation);
  return g;
}

double surface_metric(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                      const geometry::ShapeModel& shape) {
  return percent_error(truth, model, surface_points(shape));
}

bool MetricsReport::diverged(const std::optional<double>& pct) {
  return pct.has_value() && !(*pct <= 100.0);
}

bool MetricsReport::any_diverged() const {
  return diverged(planes_pct) || diverged(interior_pct) || diverged(exterior_pct) ||
         diverged(extrapolation_pct) || diverged(surface_pct);
}

MetricSuite::MetricSuite(std::shared_ptr<const analytic::GravityModel> truth,
                         std::shared_ptr<const geometry::ShapeModel> shape, double R,
                         std::uint64_t seed, int plane_resolution, int per_unit)
    : truth_(std::move(truth)), shape_(std::move(shape)), R_(R) {
  if (!truth_) throw InvalidArgument("metric suite needs a truth model");
  planes_ = plane_grid(R_, shape_.get(), plane_resolution);
  sets_ = altitude_sets(R_, shape_.get(), seed, per_unit);
  if (shape_) surface_ = surface_points(*shape_);
  a_planes_ = truth_->accelerations(planes_.points);
  a_int_ = truth_->accelerations(sets_.interior);
  a_ext_ = truth_->accelerations(sets_.exterior);
  a_xtr_ = truth_->accelerations(sets_.extrapolation);
  a_surf_ = truth_->accelerations(surface_);
}

MetricsReport MetricSuite::evaluate(const analytic::GravityModel& model) const {
  MetricsReport rep;
  rep.kind = model.kind();
  rep.params = model.parameter_count();

  const auto pred = model.accelerations(planes_.points);
  rep.planes_pct = percent_error_stats(a_planes_, pred).mean;
  std::size_t offset = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto n = static_cast<std::ptrdiff_t>(planes_.kept[p]);
    if (n > 0) {
      const auto b = static_cast<std::ptrdiff_t>(offset);
      rep.plane_stats[p] = percent_error_stats({a_planes_.begin() + b, a_planes_.begin() + b + n},
                                               {pred.begin() + b, pred.begin() + b + n});
    }
    offset += planes_.kept[p];
  }
  rep.planes_excluded = planes_.excluded_interior;
  rep.interior_excluded = sets_.excluded_interior;

  if (!sets_.interior.empty()) {
    rep.interior_pct = percent_error_stats(a_int_, model.accelerations(sets_.interior)).mean;
  }
  rep.exterior_pct = percent_error_stats(a_ext_, model.accelerations(sets_.exterior)).mean;
  rep.extrapolation_pct =
      percent_error_stats(a_xtr_, model.accelerations(sets_.extrapolation)).mean;
  if (!surface_.empty()) {
    rep.surface_pct = percent_error_stats(a_surf_, model.accelerations(surface_)).mean;
  }
  return rep;
}

}  // namespace pinngm::eval
