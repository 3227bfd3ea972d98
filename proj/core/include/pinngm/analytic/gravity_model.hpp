/**
 * @file gravity_model.hpp
 * @brief Common evaluation contract shared by every gravity model.
 *
 * Convention used throughout the toolkit: the potential is positive
 * (U = mu/r for a point mass) and the acceleration is its gradient, a = grad U.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pinngm/common/types.hpp"

namespace pinngm::analytic {

struct GravityEval {
  double U = 0.0;
  Vec3 a = Vec3::Zero();
};

class GravityModel {
 public:
  virtual ~GravityModel() = default;

  /// Potential and acceleration at a body-fixed field point. Models that only
  /// learn accelerations report U = NaN.
  virtual GravityEval evaluate(const Vec3& x) const = 0;

  virtual Vec3 acceleration(const Vec3& x) const { return evaluate(x).a; }

  /// Batched evaluation; models with a faster vectorized path override it.
  virtual std::vector<Vec3> accelerations(const PointList& points) const {
    std::vector<Vec3> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(acceleration(p));
    return out;
  }

  /// Number of free parameters under the usual accounting for the model
  /// family (Stokes coefficients, 4 per mascon, weights and biases, ...).
  virtual std::size_t parameter_count() const = 0;

  virtual std::string kind() const = 0;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Newtonian constant of gravitation [m^3 kg^-1 s^-2].
inline constexpr double kGravitationalConstant = 6.67430e-11;

}  // namespace pinngm::analytic
