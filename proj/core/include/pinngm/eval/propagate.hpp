/**
 * @file propagate.hpp
 * @brief Orbit propagation about a body spinning about its z axis, and the
 * accumulated position error between two sampled trajectories.
 */
#pragma once

#include <vector>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/eval/orbit.hpp"

namespace pinngm::eval {

struct TrajectoryConfig {
  OrbitalElements elements;
  /// Body spin rate about z [deg/s].
  double omega0_deg = 0.00073;
  double duration = 86400.0;
  double sample_step = 86.4;
  double rtol = 1e-10;
  double atol = 1e-12;

  void validate() const;
};

/// The polar orbit {2R, 0.1, 90 deg, 0, 0, 0} about a spinning body, one day.
/// With R = 16 km this is the 32 km reference orbit.
TrajectoryConfig reference_orbit(double R);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  double wall_time = 0.0;
  /// False when the integrator gave up before reaching the final time.
  bool complete = true;
  std::string failure;
};

/// Dormand-Prince 5(4) in the inertial frame. The field point is rotated into
/// the body frame by -omega0 t about z, the acceleration rotated back.
/// Samples at t = 0, step, 2 step, ... up to the duration.
Trajectory propagate(const analytic::GravityModel& model, double mu, const TrajectoryConfig& config);

struct AccumulatedError {
  double S_km = 0.0;
  double final_km = 0.0;
};

/// Sum of sample-wise position deviations. Throws InvalidArgument when the
/// sample times differ.
AccumulatedError accumulated_error(const Trajectory& model, const Trajectory& truth);

}  // namespace pinngm::eval
