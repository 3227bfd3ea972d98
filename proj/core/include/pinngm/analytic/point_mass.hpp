/**
 * @file point_mass.hpp
 * @brief Point-mass potential mu/r.
 */
#pragma once

#include "pinngm/analytic/gravity_model.hpp"

namespace pinngm::analytic {

/// U = mu/|x|, a = -mu x/|x|^3. Throws SingularityError at the origin.
GravityEval pm_eval(double mu, const Vec3& x);

class PointMassModel final : public GravityModel {
 public:
  explicit PointMassModel(double mu, Vec3 center = Vec3::Zero());

  GravityEval evaluate(const Vec3& x) const override { return pm_eval(mu_, x - center_); }
  std::size_t parameter_count() const override { return 1; }
  std::string kind() const override { return "point_mass"; }

  double mu() const noexcept { return mu_; }
  const Vec3& center() const noexcept { return center_; }

 private:
  double mu_;
  Vec3 center_;
};

}  // namespace pinngm::analytic
