/**
 * @file metrics.hpp
 * @brief Acceleration percent-error metrics: Cartesian planes, altitude
 * regimes and the surface.
 */
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/geometry/shape.hpp"

namespace pinngm::eval {

struct ErrorStats {
  double mean = 0.0;
  double stddev = 0.0;
  double max = 0.0;
  std::size_t used = 0;
  /// Samples dropped because the truth acceleration is zero.
  std::size_t excluded = 0;
};

/// |a_true - a_model| / |a_true| * 100 per point. Points with zero truth
/// acceleration are skipped and counted; a non-finite model value makes the
/// mean non-finite.
ErrorStats percent_error_stats(const std::vector<Vec3>& truth, const std::vector<Vec3>& predicted);

/// Mean percent error of `model` against `truth` over `points`.
double percent_error(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                     const PointList& points);

struct PlaneGrid {
  PointList points;
  /// Grid points kept per plane (XY, XZ, YZ) after interior masking.
  std::array<std::size_t, 3> kept{};
  std::size_t candidates = 0;
  std::size_t excluded_interior = 0;
};

/// Three n x n grids over [-extent R, extent R] in the XY, XZ and YZ planes.
/// With a shape, points inside the body are removed.
PlaneGrid plane_grid(double R, const geometry::ShapeModel* shape, int n = 200,
                     double extent = 5.0);

struct AltitudeSets {
  PointList interior;       // r in [0, R], outside the body
  PointList exterior;       // r in [R, 10 R]
  PointList extrapolation;  // r in [10 R, 100 R]
  std::size_t excluded_interior = 0;
};

/// `per_unit` samples per radius unit, radius uniform within each regime and
/// isotropic direction.
AltitudeSets altitude_sets(double R, const geometry::ShapeModel* shape, std::uint64_t seed,
                           int per_unit = 500);

/// Facet centroids pushed `offset` R along the outward normal.
PointList surface_points(const geometry::ShapeModel& shape, double offset = 1e-6);

double planes_metric(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                     double R, const geometry::ShapeModel* shape = nullptr);

struct GeneralizationResult {
  double interior_pct = 0.0;
  double exterior_pct = 0.0;
  double extrapolation_pct = 0.0;
};

GeneralizationResult generalization_metric(const analytic::GravityModel& truth,
                                           const analytic::GravityModel& model, double R,
                                           const geometry::ShapeModel* shape = nullptr,
                                           std::uint64_t seed = 0);

double surface_metric(const analytic::GravityModel& truth, const analytic::GravityModel& model,
                      const geometry::ShapeModel& shape);

struct MetricsReport {
  std::string name;
  std::string kind;
  std::optional<double> planes_pct;
  std::optional<double> interior_pct;
  std::optional<double> exterior_pct;
  std::optional<double> extrapolation_pct;
  std::optional<double> surface_pct;
  std::optional<double> accumulated_error_km;
  std::optional<double> final_position_error_km;
  std::optional<double> propagation_time_s;
  std::optional<double> regression_time_s;
  std::size_t params = 0;

  std::array<ErrorStats, 3> plane_stats{};
  std::size_t planes_excluded = 0;
  std::size_t interior_excluded = 0;

  /// A regime counts as diverged when its mean exceeds 100 % (or is not finite).
  static bool diverged(const std::optional<double>& pct);
  bool any_diverged() const;
};

/**
 * Evaluation points and truth accelerations computed once and reused for
 * every model scored against the same truth.
 */
class MetricSuite {
 public:
  MetricSuite(std::shared_ptr<const analytic::GravityModel> truth,
              std::shared_ptr<const geometry::ShapeModel> shape, double R, std::uint64_t seed = 0,
              int plane_resolution = 200, int per_unit = 500);

  /// Planes, generalization and surface fields of the report.
  MetricsReport evaluate(const analytic::GravityModel& model) const;

  const PlaneGrid& planes() const noexcept { return planes_; }
  const AltitudeSets& altitudes() const noexcept { return sets_; }
  const PointList& surface() const noexcept { return surface_; }
  double radius() const noexcept { return R_; }
  const analytic::GravityModel& truth() const noexcept { return *truth_; }

 private:
  std::shared_ptr<const analytic::GravityModel> truth_;
  std::shared_ptr<const geometry::ShapeModel> shape_;
  double R_;
  PlaneGrid planes_;
  AltitudeSets sets_;
  PointList surface_;
  std::vector<Vec3> a_planes_, a_int_, a_ext_, a_xtr_, a_surf_;
};

}  // namespace pinngm::eval
