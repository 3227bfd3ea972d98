/**
 * @file orbit.hpp
 * @brief Classical orbital elements to inertial Cartesian state.
 */
#pragma once

#include "pinngm/common/types.hpp"

namespace pinngm::eval {

/// Angles in radians.
struct OrbitalElements {
  double a = 0.0;
  double e = 0.0;
  double inc = 0.0;
  double argp = 0.0;
  double raan = 0.0;
  double mean_anomaly = 0.0;
};

struct CartesianState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

/// Eccentric anomaly from Kepler's equation by Newton iteration (tolerance
/// 1e-12, at most 50 iterations; NumericalError otherwise).
double solve_kepler(double mean_anomaly, double e);

CartesianState elements_to_state(const OrbitalElements& el, double mu);

double deg2rad(double deg);

}  // namespace pinngm::eval
