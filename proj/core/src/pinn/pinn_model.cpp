#include "pinngm/pinn/pinn_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinngm/common/error.hpp"
#include "pinngm/network/jet.hpp"

namespace pinngm::pinn {
namespace {

using network::AffineCoefficients;
using network::Mat3X;

struct CoefConfig {
  bool proxy;
  bool boundary;
  bool fusion;
  double k_star;
  double R_star;
  double lf_scale;  // mu / (x_star U_star)
  double lf_R;      // LF reference radius / x_star
  double lf_c20;
};

template <typename S>
S lf_potential(const CoefConfig& c, const S& r, const S& z) {
  S u = S(c.lf_scale) / r;
  if (c.lf_c20 != 0.0) {
    const S rho = S(c.lf_R) / r;
    const S sin_lat = z / r;
    u = u * (S(1.0) + rho * rho * S(c.lf_c20) * S(0.5) * (S(3.0) * sin_lat * sin_lat - S(1.0)));
  }
  return u;
}

template <typename S>
void coefficients(const CoefConfig& c, const S& x, const S& y, const S& z, const S& k,
                  const S& r_ref, S& c1, S& c0) {
  using ad::sqrt;
  using std::sqrt;
  const S r = sqrt(x * x + y * y + z * z);
  const S inv_n = c.proxy && ad::primal(r) >= 1.0 ? S(1.0) / r : S(1.0);
  const S u_lf = lf_potential(c, r, z);
  const S u_lf_hat =
      c.fusion ? transition_t(r, S(c.k_star), S(c.R_star)) * u_lf : S(0.0);
  if (c.boundary) {
    const S w_bc = transition_t(r, k, r_ref);
    c1 = (S(1.0) - w_bc) * inv_n;
    c0 = c.fusion ? u_lf_hat : w_bc * u_lf;
  } else {
    c1 = inv_n;
    c0 = u_lf_hat;
  }
}

}  // namespace

NonDimConstants NonDimConstants::from(double x_star, double U_star) {
  if (!(x_star > 0.0) || !(U_star > 0.0)) {
    throw InvalidArgument("non-dimensional scales must be positive");
  }
  NonDimConstants c;
  c.x_star = x_star;
  c.U_star = U_star;
  c.t_star = std::sqrt(x_star * x_star / U_star);
  c.a_star = x_star / (c.t_star * c.t_star);
  return c;
}

double LowFidelityModel::potential(const Vec3& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw SingularityError("low-fidelity potential evaluated at the origin");
  double u = mu / r;
  if (c20 != 0.0) {
    const double s = x.z() / r;
    u *= 1.0 + (R / r) * (R / r) * c20 * 0.5 * (3.0 * s * s - 1.0);
  }
  return u;
}

PinnModel::PinnModel(network::MlpParams params, NonDimConstants constants, BoundaryConfig boundary,
                     FusionConfig fusion, PipelineOptions options)
    : params_(std::move(params)),
      constants_(constants),
      boundary_(boundary),
      fusion_(fusion),
      options_(options) {
  if (params_.arch.wiring != network::Wiring::kGated || params_.arch.out_dim != 1 ||
      params_.arch.extra != 2) {
    throw InvalidArgument("PINN needs a gated scalar network with two transition scalars");
  }
  if (params_.arch.in_dim != feature_dim(options_.features)) {
    throw InvalidArgument("network input width does not match the feature map");
  }
  if (!(boundary_.k > 0.0) || !(boundary_.r_ref >= 1.0)) {
    throw InvalidArgument("boundary blending needs k > 0 and r_ref >= 1");
  }
  params_.extra(0) = boundary_.k;
  params_.extra(1) = boundary_.r_ref;
}

void PinnModel::set_params(network::MlpParams params) {
  if (!(params.arch == params_.arch)) throw InvalidArgument("architecture mismatch");
  params_ = std::move(params);
}

BoundaryConfig PinnModel::boundary() const {
  BoundaryConfig b = boundary_;
  b.k = params_.extra(0);
  b.r_ref = params_.extra(1);
  return b;
}

void PinnModel::project_parameters() {
  params_.extra(0) = std::max(params_.extra(0), 1e-3);
  params_.extra(1) = std::max(params_.extra(1), 1.0);
}

network::PipelineBatch PinnModel::make_batch(const Mat3X& x_nd, int order,
                                             CoefficientJacobians* jac) const {
  const int n = static_cast<int>(x_nd.cols());
  const int f = feature_dim(options_.features);
  const int K = network::jet_blocks(order);
  network::PipelineBatch b;
  b.n = n;
  b.order = order;
  b.features.resize(f, static_cast<Eigen::Index>(K) * n);
  b.coef.resize(n);
  b.coef.ddc1.setZero();
  b.coef.ddc0.setZero();
  if (jac != nullptr) {
    jac->dk.set_zero(n);
    jac->dr.set_zero(n);
  }

  const CoefConfig cfg{options_.proxy,
                       boundary_.enabled,
                       fusion_.enabled,
                       fusion_.k_star,
                       fusion_.R_star,
                       fusion_.lf.mu / (constants_.x_star * constants_.U_star),
                       fusion_.lf.R / constants_.x_star,
                       fusion_.lf.c20};
  const double k = params_.extra(0);
  const double r_ref = params_.extra(1);

  for (int i = 0; i < n; ++i) {
    const Vec3 x = x_nd.col(i);
    const MatX fj = feature_jets(options_.features, x, order);
    for (int blk = 0; blk < K; ++blk) b.features.col(static_cast<Eigen::Index>(blk) * n + i) = fj.col(blk);

    for (int j = 0; j < 3; ++j) {
      if (jac == nullptr) {
        using S = ad::Jet2<double>;
        S p[3] = {S(x.x()), S(x.y()), S(x.z())};
        p[j].d = 1.0;
        S c1, c0;
        coefficients(cfg, p[0], p[1], p[2], S(k), S(r_ref), c1, c0);
        if (j == 0) {
          b.coef.c1[i] = c1.v;
          b.coef.c0[i] = c0.v;
        }
        b.coef.dc1(j, i) = c1.d;
        b.coef.dc0(j, i) = c0.d;
        b.coef.ddc1(j, i) = c1.dd;
        b.coef.ddc0(j, i) = c0.dd;
      } else {
        using D = ad::Dual<2>;
        using S = ad::Jet2<D>;
        S p[3] = {S(x.x()), S(x.y()), S(x.z())};
        p[j].d = D(1.0);
        const S ks(D::variable(k, 0), D(0.0), D(0.0));
        const S rs(D::variable(r_ref, 1), D(0.0), D(0.0));
        S c1, c0;
        coefficients(cfg, p[0], p[1], p[2], ks, rs, c1, c0);
        if (j == 0) {
          b.coef.c1[i] = c1.v.v;
          b.coef.c0[i] = c0.v.v;
          jac->dk.c1[i] = c1.v.d[0];
          jac->dr.c1[i] = c1.v.d[1];
          jac->dk.c0[i] = c0.v.d[0];
          jac->dr.c0[i] = c0.v.d[1];
        }
        b.coef.dc1(j, i) = c1.d.v;
        b.coef.dc0(j, i) = c0.d.v;
        b.coef.ddc1(j, i) = c1.dd.v;
        b.coef.ddc0(j, i) = c0.dd.v;
        jac->dk.dc1(j, i) = c1.d.d[0];
        jac->dr.dc1(j, i) = c1.d.d[1];
        jac->dk.dc0(j, i) = c0.d.d[0];
        jac->dr.dc0(j, i) = c0.d.d[1];
        jac->dk.ddc1(j, i) = c1.dd.d[0];
        jac->dr.ddc1(j, i) = c1.dd.d[1];
        jac->dk.ddc0(j, i) = c0.dd.d[0];
        jac->dr.ddc0(j, i) = c0.dd.d[1];
      }
    }
  }
  return b;
}

namespace {

double contract(const AffineCoefficients& bar, const AffineCoefficients& d) {
  return bar.c1.dot(d.c1) + bar.c0.dot(d.c0) + (bar.dc1.array() * d.dc1.array()).sum() +
         (bar.dc0.array() * d.dc0.array()).sum() + (bar.ddc1.array() * d.ddc1.array()).sum() +
         (bar.ddc0.array() * d.ddc0.array()).sum();
}

}  // namespace

network::LossResult PinnModel::loss_and_gradient(const Mat3X& x_nd, const Mat3X& a_nd,
                                                 network::LossKind kind,
                                                 bool with_gradient) const {
  const int order = kind == network::LossKind::kAl ? 2 : 1;
  const bool chain = with_gradient && boundary_.enabled && boundary_.trainable;
  CoefficientJacobians jac;
  network::PipelineBatch batch = make_batch(x_nd, order, chain ? &jac : nullptr);
  batch.target = a_nd;
  network::LossResult res = network::loss_param_grad(params_, batch, kind, with_gradient);
  if (chain) {
    const auto m = res.grad.size();
    res.grad[m - 2] = contract(res.coef_bar, jac.dk);
    res.grad[m - 1] = contract(res.coef_bar, jac.dr);
  }
  return res;
}

network::LossResult PinnModel::loss_and_gradient(const network::PipelineBatch& batch,
                                                 network::LossKind kind,
                                                 bool with_gradient) const {
  return network::loss_param_grad(params_, batch, kind, with_gradient);
}

analytic::GravityEval PinnModel::evaluate(const Vec3& x) const {
  Mat3X xn(3, 1);
  xn.col(0) = x / constants_.x_star;
  const network::PipelineBatch b = make_batch(xn, 1);
  const network::PipelineOutputs out = network::evaluate_pipeline(params_, b);
  analytic::GravityEval g;
  g.U = out.potential[0] * constants_.U_star;
  g.a = out.acceleration.col(0) * constants_.a_star;
  return g;
}

std::vector<Vec3> PinnModel::accelerations(const PointList& points) const {
  std::vector<Vec3> result;
  result.reserve(points.size());
  constexpr std::size_t kChunk = 1024;
  for (std::size_t start = 0; start < points.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, points.size() - start);
    Mat3X xn(3, static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      xn.col(static_cast<Eigen::Index>(i)) = points[start + i] / constants_.x_star;
    }
    const network::PipelineBatch b = make_batch(xn, 1);
    const network::PipelineOutputs out = network::evaluate_pipeline(params_, b);
    for (std::size_t i = 0; i < count; ++i) {
      result.push_back(out.acceleration.col(static_cast<Eigen::Index>(i)) * constants_.a_star);
    }
  }
  return result;
}

double PinnModel::potential(const Vec3& x) const { return evaluate(x).U; }

double PinnModel::laplacian(const Vec3& x) const {
  Mat3X xn(3, 1);
  xn.col(0) = x / constants_.x_star;
  const network::PipelineBatch b = make_batch(xn, 2);
  const network::PipelineOutputs out = network::evaluate_pipeline(params_, b);
  return out.laplacian[0] * constants_.U_star / (constants_.x_star * constants_.x_star);
}

NonDimConstants compute_constants(const PointList& positions,
                                  const std::optional<std::vector<double>>& potentials, double R,
                                  const LowFidelityModel* lf, double mu) {
  if (!(R > 0.0)) throw InvalidArgument("reference radius must be positive");
  if (!potentials) return NonDimConstants::from(R, mu / R);
  if (potentials->size() != positions.size()) {
    throw InvalidArgument("potential labels and positions differ in length");
  }
  double best = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double base = lf != nullptr ? lf->potential(positions[i]) : 0.0;
    best = std::max(best, (*potentials)[i] - base);
    scale = std::max(scale, std::abs((*potentials)[i]));
  }
  // A residual at round-off level means the low-fidelity model is exact.
  if (!(best > 1e-12 * scale)) {
    throw NumericalError(
        "U_star = max(U - U_LF) is not positive: the low-fidelity model meets or exceeds the "
        "data everywhere; disable fusion when computing the potential scale");
  }
  return NonDimConstants::from(R, best);
}

double pinn_potential(const PinnModel& model, const Vec3& x) { return model.potential(x); }
Vec3 pinn_acceleration(const PinnModel& model, const Vec3& x) { return model.acceleration(x); }
double pinn_laplacian(const PinnModel& model, const Vec3& x) { return model.laplacian(x); }

}  // namespace pinngm::pinn
