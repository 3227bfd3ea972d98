#include "pinngm/eval/orbit.hpp"

#include <cmath>
#include <numbers>

#include "pinngm/common/error.hpp"

namespace pinngm::eval {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

double solve_kepler(double M, double e) {
  if (!(e >= 0.0 && e < 1.0)) throw InvalidArgument("Kepler's equation needs 0 <= e < 1");
  double E = e < 0.8 ? M : std::numbers::pi;
  for (int it = 0; it < 50; ++it) {
    const double f = E - e * std::sin(E) - M;
    const double dE = f / (1.0 - e * std::cos(E));
    E -= dE;
    if (std::abs(dE) < 1e-12) return E;
  }
  throw NumericalError("Kepler's equation did not converge in 50 iterations");
}

CartesianState elements_to_state(const OrbitalElements& el, double mu) {
  if (!(el.a > 0.0)) throw InvalidArgument("semi-major axis must be positive");
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  const double E = solve_kepler(el.mean_anomaly, el.e);
  const double b = std::sqrt(1.0 - el.e * el.e);
  const double r = el.a * (1.0 - el.e * std::cos(E));
  const double n = std::sqrt(mu / (el.a * el.a * el.a));

  const Vec3 r_pf(el.a * (std::cos(E) - el.e), el.a * b * std::sin(E), 0.0);
  const Vec3 v_pf = (el.a * el.a * n / r) * Vec3(-std::sin(E), b * std::cos(E), 0.0);

  const Mat3 Q = (Eigen::AngleAxisd(el.raan, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(el.inc, Vec3::UnitX()) *
                  Eigen::AngleAxisd(el.argp, Vec3::UnitZ()))
                     .toRotationMatrix();
  return {Q * r_pf, Q * v_pf};
}

}  // namespace pinngm::eval
