#include "pinngm/eval/propagate.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"

namespace pinngm::eval {

namespace odeint = boost::numeric::odeint;

void TrajectoryConfig::validate() const {
  if (!(elements.a > 0.0)) throw InvalidArgument("orbit semi-major axis must be positive");
  if (!(elements.e >= 0.0 && elements.e < 1.0)) throw InvalidArgument("orbit needs 0 <= e < 1");
  if (!(duration > 0.0)) throw InvalidArgument("propagation duration must be positive");
  if (!(sample_step > 0.0)) throw InvalidArgument("sample step must be positive");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("tolerances must be positive");
}

TrajectoryConfig reference_orbit(double R) {
  TrajectoryConfig c;
  c.elements = {2.0 * R, 0.1, deg2rad(90.0), 0.0, 0.0, 0.0};
  return c;
}

namespace {

using State = std::array<double, 6>;

struct NonFinite {};

}  // namespace

Trajectory propagate(const analytic::GravityModel& model, double mu,
                     const TrajectoryConfig& config) {
  config.validate();
  const CartesianState s0 = elements_to_state(config.elements, mu);
  const double omega = deg2rad(config.omega0_deg);

  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::floor(config.duration / config.sample_step + 1e-9));
  for (std::size_t j = 0; j <= n; ++j) times.push_back(static_cast<double>(j) * config.sample_step);

  auto rhs = [&](const State& x, State& dx, double t) {
    const Eigen::AngleAxisd to_inertial(omega * t, Vec3::UnitZ());
    const Vec3 r_body = to_inertial.inverse() * Vec3(x[0], x[1], x[2]);
    const Vec3 a = to_inertial * model.acceleration(r_body);
    dx = {x[3], x[4], x[5], a.x(), a.y(), a.z()};
  };

  Trajectory traj;
  auto observe = [&](const State& x, double t) {
    for (double v : x) {
      if (!std::isfinite(v)) throw NonFinite{};
    }
    traj.times.push_back(t);
    traj.positions.emplace_back(x[0], x[1], x[2]);
    traj.velocities.emplace_back(x[3], x[4], x[5]);
  };

  State x = {s0.r.x(), s0.r.y(), s0.r.z(), s0.v.x(), s0.v.y(), s0.v.z()};
  auto stepper = odeint::make_dense_output(config.atol, config.rtol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = std::min(config.sample_step, 1.0);

  const auto start = std::chrono::steady_clock::now();
  try {
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observe);
  } catch (const NonFinite&) {
    traj.complete = false;
    traj.failure = "state became non-finite";
  } catch (const odeint::odeint_error& e) {
    traj.complete = false;
    traj.failure = e.what();
  }
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!traj.complete) {
    log::warn("propagation stopped at t = ", traj.times.empty() ? 0.0 : traj.times.back(),
              " s: ", traj.failure);
  }
  return traj;
}

AccumulatedError accumulated_error(const Trajectory& model, const Trajectory& truth) {
  if (model.times.size() != truth.times.size()) {
    throw InvalidArgument("trajectories have different sample counts");
  }
  AccumulatedError out;
  for (std::size_t j = 0; j < model.times.size(); ++j) {
    if (std::abs(model.times[j] - truth.times[j]) > 1e-9 * std::max(1.0, std::abs(truth.times[j]))) {
      throw InvalidArgument("trajectories are sampled at different times");
    }
    const double d = (model.positions[j] - truth.positions[j]).norm() / 1000.0;
    out.S_km += d;
    out.final_km = d;
  }
  return out;
}

}  // namespace pinngm::eval
