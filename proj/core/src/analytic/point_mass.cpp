#include "pinngm/analytic/point_mass.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"

namespace pinngm::analytic {

GravityEval pm_eval(double mu, const Vec3& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw SingularityError("point-mass field evaluated at its own location");
  return {mu / r, -mu / (r * r * r) * x};
}

PointMassModel::PointMassModel(double mu, Vec3 center) : mu_(mu), center_(std::move(center)) {}

}  // namespace pinngm::analytic
