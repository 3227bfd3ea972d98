/**
 * @file polyhedral.hpp
 * @brief Constant-density polyhedron gravity (edge dyads and face dyads).
 */
#pragma once

#include <memory>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/geometry/shape.hpp"

namespace pinngm::analytic {

class PolyhedralModel final : public GravityModel {
 public:
  /// Density chosen so the solid's total gravitational parameter is `mu`.
  PolyhedralModel(std::shared_ptr<const geometry::ShapeModel> shape, double mu);
  static PolyhedralModel from_density(std::shared_ptr<const geometry::ShapeModel> shape,
                                      double sigma);

  /// Throws SingularityError naming the edge or facet when x lies on the
  /// surface.
  GravityEval evaluate(const Vec3& x) const override;

  /// Sum of facet solid angles times -G sigma: 0 outside, -4 pi G sigma inside.
  double laplacian(const Vec3& x) const;

  std::size_t parameter_count() const override;
  std::string kind() const override { return "polyhedral"; }

  double mu() const noexcept { return mu_; }
  double g_sigma() const noexcept { return g_sigma_; }
  const geometry::ShapeModel& shape() const noexcept { return *shape_; }
  std::shared_ptr<const geometry::ShapeModel> shape_ptr() const noexcept { return shape_; }

 private:
  void precompute();

  std::shared_ptr<const geometry::ShapeModel> shape_;
  double mu_ = 0.0;
  double g_sigma_ = 0.0;
  std::vector<Mat3> edge_dyads_;
  std::vector<double> edge_lengths_;
  std::vector<Mat3> face_dyads_;
};

}  // namespace pinngm::analytic
