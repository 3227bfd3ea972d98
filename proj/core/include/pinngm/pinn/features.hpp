/**
 * @file features.hpp
 * @brief Feature map, proxy unscaling and the tanh transition used by the
 * PINN pipeline. All quantities are non-dimensional (radius in units of R).
 */
#pragma once

#include <string>

#include "pinngm/common/types.hpp"
#include "pinngm/pinn/scalar.hpp"

namespace pinngm::pinn {

enum class FeatureKind {
  kRadial5,     // (r_i, r_e, s, t, u)
  kCartesian3,  // raw non-dimensional (x, y, z)
};

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);
int feature_dim(FeatureKind kind);

struct FeatureVector {
  double r_i = 0.0;
  double r_e = 0.0;
  double s = 0.0;
  double t = 0.0;
  double u = 0.0;
};

using FeatureJacobian = Eigen::Matrix<double, 5, 3>;

/// Features of a non-dimensional position and their exact Jacobian. At r = 1
/// the exterior branch (r_i = 1, r_e = 1/r) is used for the derivative.
/// Throws SingularityError at the origin.
std::pair<FeatureVector, FeatureJacobian> features(const Vec3& x);

/// Generic feature map on any scalar type; writes feature_dim(kind) values.
template <typename S>
void feature_map(FeatureKind kind, const S& x, const S& y, const S& z, S* out) {
  if (kind == FeatureKind::kCartesian3) {
    out[0] = x;
    out[1] = y;
    out[2] = z;
    return;
  }
  using ad::sqrt;
  using std::sqrt;
  const S r = sqrt(x * x + y * y + z * z);
  if (ad::primal(r) < 1.0) {
    out[0] = r;
    out[1] = S(1.0);
  } else {
    out[0] = S(1.0);
    out[1] = S(1.0) / r;
  }
  out[2] = x / r;
  out[3] = y / r;
  out[4] = z / r;
}

/// Feature jets for one point in the layout expected by the network: column 0
/// value, columns 1..3 d/dx_j, columns 4..6 d^2/dx_j^2 (when order == 2).
MatX feature_jets(FeatureKind kind, const Vec3& x, int order);

/// U_NN / n(r) with n = 1 inside the unit sphere and n = r outside.
double unscale_proxy(double U_nn, double r);

/// H(r) = (1 + tanh(k (r - r_ref))) / 2.
double transition(double r, double k, double r_ref);

template <typename S>
S transition_t(const S& r, const S& k, const S& r_ref) {
  using ad::tanh;
  using std::tanh;
  return S(0.5) * (S(1.0) + tanh(k * (r - r_ref)));
}

}  // namespace pinngm::pinn
