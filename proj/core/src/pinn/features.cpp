#include "pinngm/pinn/features.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"

namespace pinngm::pinn {

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::kRadial5 ? "radial5" : "cartesian3";
}

FeatureKind feature_kind_from_string(const std::string& name) {
  if (name == "radial5") return FeatureKind::kRadial5;
  if (name == "cartesian3") return FeatureKind::kCartesian3;
  throw InvalidArgument("unknown feature kind '" + name + "'");
}

int feature_dim(FeatureKind kind) { return kind == FeatureKind::kRadial5 ? 5 : 3; }

MatX feature_jets(FeatureKind kind, const Vec3& x, int order) {
  if (!(x.norm() > 0.0)) throw SingularityError("features undefined at the origin");
  using J = ad::Jet2<double>;
  const int f = feature_dim(kind);
  MatX out(f, 1 + 3 * order);
  J vals[5];
  for (int j = 0; j < 3; ++j) {
    J p[3] = {J(x.x()), J(x.y()), J(x.z())};
    p[j].d = 1.0;
    feature_map(kind, p[0], p[1], p[2], vals);
    for (int q = 0; q < f; ++q) {
      if (j == 0) out(q, 0) = vals[q].v;
      if (order >= 1) out(q, 1 + j) = vals[q].d;
      if (order >= 2) out(q, 4 + j) = vals[q].dd;
    }
  }
  return out;
}

std::pair<FeatureVector, FeatureJacobian> features(const Vec3& x) {
  const MatX jets = feature_jets(FeatureKind::kRadial5, x, 1);
  FeatureVector fv{jets(0, 0), jets(1, 0), jets(2, 0), jets(3, 0), jets(4, 0)};
  FeatureJacobian jac = jets.rightCols(3);
  return {fv, jac};
}

double unscale_proxy(double U_nn, double r) {
  if (!(r > 0.0)) throw InvalidArgument("unscale_proxy needs r > 0");
  return r < 1.0 ? U_nn : U_nn / r;
}

double transition(double r, double k, double r_ref) { return transition_t(r, k, r_ref); }

}  // namespace pinngm::pinn
