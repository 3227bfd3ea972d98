/**
 * @file test_pinn.cpp
 * @brief Feature map, transitions, the assembled PINN field, its losses and
 * bundles.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "pinngm/analytic/point_mass.hpp"
#include "pinngm/common/error.hpp"
#include "pinngm/pinn/bundle.hpp"
#include "pinngm/pinn/factory.hpp"
#include "pinngm/pinn/features.hpp"
#include "pinngm/pinn/losses.hpp"
#include "pinngm/pinn/pinn_model.hpp"
#include "test_support.hpp"

using namespace pinngm;
using namespace pinngm::pinn;

namespace {

constexpr double kMu = 4.463e5;
constexpr double kR = 16000.0;

// Random network weights so the learned part is not negligible.
PinnModel make_model(bool proxy, bool boundary, bool fusion, double k = 1.5, double r_ref = 2.0,
                     double c20 = 0.0, std::uint64_t seed = 1) {
  const network::MlpArch arch{network::Wiring::kGated, 3, 8, 5, 1, 2};
  auto p = network::init_params(arch, seed);
  std::mt19937_64 rng(seed + 50);
  std::normal_distribution<double> g(0.0, 0.2);
  for (Eigen::Index i = 0; i < p.theta.size(); ++i) p.theta[i] += g(rng);
  BoundaryConfig b{boundary, r_ref, k, true};
  FusionConfig f{fusion, 1.0, 0.5, {kMu, kR, c20}};
  return PinnModel(p, NonDimConstants::from(kR, 0.8 * kMu / kR), b, f, {FeatureKind::kRadial5, proxy});
}

// The field assembled directly from the network output and the definitions
// of the proxy, boundary and fusion stages.
double oracle_potential(const PinnModel& m, const Vec3& x) {
  const auto& c = m.constants();
  const Vec3 xh = x / c.x_star;
  const double r = xh.norm();
  const auto [fv, jac] = features(xh);
  VecX f(5);
  f << fv.r_i, fv.r_e, fv.s, fv.t, fv.u;
  const double y = network::forward(m.params(), f);
  const double n = (m.options().proxy && r >= 1.0) ? r : 1.0;
  const auto& lf = m.fusion().lf;
  const double u_lf = lf.potential(x) / c.U_star;
  const double H_lf = transition(r, m.fusion().k_star, m.fusion().R_star);
  const auto b = m.boundary();
  double u;
  if (b.enabled) {
    const double w_bc = transition(r, b.k, b.r_ref);
    u = (1.0 - w_bc) * y / n + (m.fusion().enabled ? H_lf * u_lf : w_bc * u_lf);
  } else {
    u = y / n + (m.fusion().enabled ? H_lf * u_lf : 0.0);
  }
  return c.U_star * u;
}

}  // namespace

TEST(Features, InvariantsOnRandomPoints) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ur(0.0, 100.0);
  for (int i = 0; i < 100000; ++i) {
    const Vec3 x = test::random_unit(rng) * ur(rng);
    if (x.norm() == 0.0) continue;
    const auto [f, J] = features(x);
    ASSERT_GE(f.r_i, 0.0);
    ASSERT_LE(f.r_i, 1.0);
    ASSERT_GT(f.r_e, 0.0);
    ASSERT_LE(f.r_e, 1.0);
    ASSERT_NEAR(f.s * f.s + f.t * f.t + f.u * f.u, 1.0, 1e-14);
    ASSERT_NEAR(f.r_i * f.r_e, x.norm() < 1.0 ? x.norm() : 1.0 / x.norm(), 1e-14);
  }
}

TEST(Features, ContinuousAtUnitRadius) {
  const Vec3 d = Vec3(1, -2, 0.5).normalized();
  const auto [a, Ja] = features(d * (1.0 - 1e-12));
  const auto [b, Jb] = features(d * (1.0 + 1e-12));
  EXPECT_NEAR(a.r_i, b.r_i, 1e-11);
  EXPECT_NEAR(a.r_e, b.r_e, 1e-11);
  const auto [c, Jc] = features(d);
  EXPECT_EQ(c.r_i, 1.0);
  EXPECT_EQ(c.r_e, 1.0);
}

TEST(Features, JacobianMatchesFiniteDifferences) {
  for (const Vec3& x : {Vec3(0.2, -0.3, 0.4), Vec3(3.0, 1.0, -2.0), Vec3(0.0, 0.0, 7.0)}) {
    const auto [f, J] = features(x);
    auto component = [](int k) {
      return [k](const Vec3& p) {
        const auto [g, unused] = features(p);
        const double v[5] = {g.r_i, g.r_e, g.s, g.t, g.u};
        return v[k];
      };
    };
    for (int k = 0; k < 5; ++k) {
      const Vec3 fd = test::fd_gradient(component(k), x, 1e-6);
      EXPECT_LT((J.row(k).transpose() - fd).norm(), 1e-8) << "feature " << k;
    }
  }
  EXPECT_THROW(features(Vec3::Zero()), SingularityError);
}

TEST(Features, JetsAgreeWithJacobian) {
  const Vec3 x(1.5, -0.5, 0.8);
  const auto [f, J] = features(x);
  const MatX jets = feature_jets(FeatureKind::kRadial5, x, 2);
  ASSERT_EQ(jets.cols(), 7);
  EXPECT_NEAR(jets(1, 0), f.r_e, 1e-15);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LT((jets.col(1 + j) - J.col(j)).norm(), 1e-14);
  }
  const MatX cart = feature_jets(FeatureKind::kCartesian3, x, 1);
  EXPECT_EQ(cart.rows(), 3);
  EXPECT_LT((cart.col(0) - x).norm(), 1e-15);
  EXPECT_LT((cart.middleCols(1, 3) - Mat3::Identity()).norm(), 1e-15);
}

TEST(Features, NamesRoundTrip) {
  for (auto k : {FeatureKind::kRadial5, FeatureKind::kCartesian3}) {
    EXPECT_EQ(feature_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(feature_kind_from_string("polar"), InvalidArgument);
  EXPECT_EQ(feature_dim(FeatureKind::kRadial5), 5);
}

TEST(Proxy, UnscalesOutsideOnly) {
  EXPECT_DOUBLE_EQ(unscale_proxy(2.0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(unscale_proxy(2.0, 4.0), 0.5);
  EXPECT_THROW(unscale_proxy(1.0, 0.0), InvalidArgument);
}

TEST(Transition, ValuesAndLimits) {
  EXPECT_DOUBLE_EQ(transition(10.0, 2.0, 10.0), 0.5);
  EXPECT_NEAR(transition(1e4, 2.0, 10.0), 1.0, 1e-15);
  EXPECT_NEAR(transition(1.0, 2.0, 10.0), 0.0, 1e-7);
  double prev = 0.0;
  for (double r = 0.0; r < 20.0; r += 0.5) {
    const double h = transition(r, 0.7, 8.0);
    EXPECT_GE(h, prev);
    EXPECT_NEAR(h, 0.5 * (1.0 + std::tanh(0.7 * (r - 8.0))), 1e-15);
    prev = h;
  }
}

TEST(Losses, ReferenceDefinitionsByHand) {
  Mat3X pred(3, 2), target(3, 2);
  pred << 1, 0, 0, 2, 0, 0;
  target << 1, 0, 0, 0, 0, 0;
  target(0, 0) = 2.0;
  target(1, 1) = 4.0;
  // errors: |(-1,0,0)| = 1 and |(0,-2,0)| = 2; label norms 2 and 4.
  pred.setZero();
  pred(0, 0) = 1.0;
  pred(1, 1) = 2.0;
  EXPECT_DOUBLE_EQ(loss_rms(pred, target), 1.5);
  EXPECT_DOUBLE_EQ(loss_rms_pct(pred, target), 1.5 + 0.5);
  VecX lap(2);
  lap << -0.2, 0.4;
  EXPECT_DOUBLE_EQ(loss_al(pred, target, lap), 2.0 + 0.3);
  Mat3X zero = Mat3X::Zero(3, 2);
  EXPECT_THROW(loss_rms_pct(pred, zero), NumericalError);
  EXPECT_THROW(loss_al(pred, target, VecX(3)), InvalidArgument);
}

class PinnStages : public ::testing::TestWithParam<std::tuple<bool, bool, bool>> {};

TEST_P(PinnStages, PotentialMatchesDefinition) {
  const auto [proxy, boundary, fusion] = GetParam();
  const auto m = make_model(proxy, boundary, fusion, 1.5, 2.0, -0.05);
  std::mt19937_64 rng(2);
  for (double r : {0.3, 0.9, 1.4, 2.0, 3.5, 12.0}) {
    const Vec3 x = test::random_unit(rng) * r * kR;
    const double want = oracle_potential(m, x);
    EXPECT_NEAR(m.potential(x), want, 1e-12 * std::abs(want) + 1e-12);
    EXPECT_NEAR(m.evaluate(x).U, want, 1e-12 * std::abs(want) + 1e-12);
  }
}

TEST_P(PinnStages, AccelerationAndLaplacianMatchFiniteDifferences) {
  const auto [proxy, boundary, fusion] = GetParam();
  const auto m = make_model(proxy, boundary, fusion, 1.5, 2.0, -0.05);
  std::mt19937_64 rng(3);
  for (double r : {0.4, 1.6, 2.5, 6.0}) {
    const Vec3 x = test::random_unit(rng) * r * kR;
    auto U = [&](const Vec3& p) { return oracle_potential(m, p); };
    const Vec3 fd = test::fd_gradient(U, x, 1e-4 * kR);
    EXPECT_LT((m.acceleration(x) - fd).norm(), 1e-6 * fd.norm()) << "r = " << r;
    const double lap = test::fd_laplacian(U, x, 1e-3 * kR);
    const double scale = fd.norm() / x.norm();
    EXPECT_NEAR(m.laplacian(x), lap, 1e-4 * scale) << "r = " << r;
  }
}

TEST_P(PinnStages, BatchedAccelerationsAgreeWithSinglePoint) {
  const auto [proxy, boundary, fusion] = GetParam();
  const auto m = make_model(proxy, boundary, fusion);
  PointList pts;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 37; ++i) pts.push_back(test::random_unit(rng) * kR * (0.2 + 0.3 * i));
  const auto batched = m.accelerations(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT((batched[i] - m.acceleration(pts[i])).norm(), 1e-12 * batched[i].norm());
  }
}

INSTANTIATE_TEST_SUITE_P(
    Ladder, PinnStages,
    ::testing::Values(std::make_tuple(false, false, false), std::make_tuple(true, false, false),
                      std::make_tuple(true, true, false), std::make_tuple(true, true, true),
                      std::make_tuple(false, true, true)));

TEST(BoundaryBlending, FarFieldReducesToLowFidelityModel) {
  for (bool fusion : {false, true}) {
    const auto m = make_model(true, true, fusion, 2.0, 10.0, 0.0);
    const analytic::PointMassModel pm(kMu);
    for (double r : {200.0, 1000.0, 1e5}) {
      const Vec3 x = Vec3(0.3, 0.4, -0.2).normalized() * r * kR;
      EXPECT_LT((m.acceleration(x) - pm.acceleration(x)).norm(), 1e-9 * pm.acceleration(x).norm())
          << "fusion " << fusion << " r " << r;
    }
  }
}

TEST(BoundaryBlending, WithoutItTheNetworkPersistsFarAway) {
  const auto m = make_model(true, false, false);
  const analytic::PointMassModel pm(kMu);
  const Vec3 x = Vec3(0.3, 0.4, -0.2).normalized() * 1000.0 * kR;
  EXPECT_GT((m.acceleration(x) - pm.acceleration(x)).norm(), 1e-3 * pm.acceleration(x).norm());
}

TEST(Model, ProjectionClampsTransitionScalars) {
  auto m = make_model(true, true, true);
  m.mutable_params().extra(0) = -1.0;
  m.mutable_params().extra(1) = 0.2;
  m.project_parameters();
  EXPECT_DOUBLE_EQ(m.boundary().k, 1e-3);
  EXPECT_DOUBLE_EQ(m.boundary().r_ref, 1.0);
}

TEST(Model, RejectsMismatchedNetwork) {
  const auto p = network::init_params({network::Wiring::kGated, 2, 8, 3, 1, 2}, 0);
  EXPECT_THROW(PinnModel(p, NonDimConstants::from(1, 1), {}, {}, {}), InvalidArgument);
  const auto q = network::init_params({network::Wiring::kPlain, 2, 8, 5, 1, 2}, 0);
  EXPECT_THROW(PinnModel(q, NonDimConstants::from(1, 1), {}, {}, {}), InvalidArgument);
}

class LossGradient : public ::testing::TestWithParam<network::LossKind> {};

TEST_P(LossGradient, IncludesTransitionScalars) {
  const auto m = make_model(true, true, false, 1.5, 2.0, -0.05, 5);
  std::mt19937_64 rng(6);
  const int n = 6;
  network::Mat3X x(3, n), a(3, n);
  for (int i = 0; i < n; ++i) {
    x.col(i) = test::random_unit(rng) * (0.6 + 0.6 * i);
    a.col(i) = -x.col(i) / std::pow(x.col(i).norm(), 3) + 0.05 * test::random_unit(rng);
  }
  const auto r = m.loss_and_gradient(x, a, GetParam());
  const VecX fd = test::fd_vector_gradient(
      [&](const VecX& th) {
        PinnModel q = m;
        q.mutable_params().theta = th;
        return q.loss_and_gradient(x, a, GetParam(), false).loss;
      },
      m.params().theta, 1e-6);
  const Eigen::Index P = fd.size();
  EXPECT_LT((r.grad.head(P - 2) - fd.head(P - 2)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.grad[P - 2], fd[P - 2], 1e-6 * std::max(1.0, std::abs(fd[P - 2])));
  EXPECT_NEAR(r.grad[P - 1], fd[P - 1], 1e-6 * std::max(1.0, std::abs(fd[P - 1])));
  EXPECT_GT(std::abs(fd[P - 1]), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Kinds, LossGradient,
                         ::testing::Values(network::LossKind::kRms, network::LossKind::kRmsPercent,
                                           network::LossKind::kAl));

TEST(LossGradient, FrozenScalarsGetNoGradient) {
  auto m = make_model(true, true, false);
  BoundaryConfig frozen = m.boundary();
  frozen.trainable = false;
  PinnModel f(m.params(), m.constants(), frozen, m.fusion(), m.options());
  network::Mat3X x(3, 2), a(3, 2);
  x << 1.5, 3.0, 0.2, -1.0, 0.1, 0.5;
  a << -0.3, -0.1, 0.0, 0.05, 0.0, -0.02;
  const auto r = f.loss_and_gradient(x, a, network::LossKind::kRmsPercent);
  EXPECT_EQ(r.grad[r.grad.size() - 1], 0.0);
  EXPECT_EQ(r.grad[r.grad.size() - 2], 0.0);
}

TEST(Losses, PipelineLossEqualsReferenceDefinition) {
  const auto m = make_model(true, true, true);
  std::mt19937_64 rng(7);
  const int n = 5;
  network::Mat3X x(3, n), a(3, n), pred(3, n);
  VecX lap(n);
  const auto& c = m.constants();
  for (int i = 0; i < n; ++i) {
    x.col(i) = test::random_unit(rng) * (0.5 + i);
    a.col(i) = test::random_unit(rng);
    pred.col(i) = m.acceleration(x.col(i) * c.x_star) / c.a_star;
    lap[i] = m.laplacian(x.col(i) * c.x_star) * c.x_star * c.x_star / c.U_star;
  }
  EXPECT_NEAR(m.loss_and_gradient(x, a, network::LossKind::kRms, false).loss, loss_rms(pred, a),
              1e-12);
  EXPECT_NEAR(m.loss_and_gradient(x, a, network::LossKind::kRmsPercent, false).loss,
              loss_rms_pct(pred, a), 1e-12);
  EXPECT_NEAR(m.loss_and_gradient(x, a, network::LossKind::kAl, false).loss,
              loss_al(pred, a, lap), 1e-10);
}

TEST(Constants, PotentialScaleFromResidual) {
  const PointList pos = {Vec3(kR, 0, 0), Vec3(0, 2 * kR, 0)};
  const std::vector<double> U = {kMu / kR * 1.1, kMu / (2 * kR) * 1.3};
  const LowFidelityModel lf{kMu, kR, 0.0};
  const auto with_lf = compute_constants(pos, U, kR, &lf, kMu);
  EXPECT_NEAR(with_lf.U_star, std::max(0.1 * kMu / kR, 0.3 * kMu / (2 * kR)), 1e-9);
  const auto without = compute_constants(pos, U, kR, nullptr, kMu);
  EXPECT_DOUBLE_EQ(without.U_star, 1.1 * kMu / kR);
  EXPECT_DOUBLE_EQ(without.x_star, kR);
  EXPECT_NEAR(without.t_star, std::sqrt(kR * kR / without.U_star), 1e-12);
  EXPECT_NEAR(without.a_star, kR / (without.t_star * without.t_star), 1e-15);
  const auto none = compute_constants(pos, std::nullopt, kR, &lf, kMu);
  EXPECT_DOUBLE_EQ(none.U_star, kMu / kR);
  const std::vector<double> exact = {kMu / kR, kMu / (2 * kR)};
  EXPECT_THROW(compute_constants(pos, exact, kR, &lf, kMu), NumericalError);
}

TEST(Factory, PresetsAndParameterCounts) {
  const PointList pos = {Vec3(kR, 0, 0), Vec3(0, 3 * kR, 0)};
  const auto small = make_pinn(pinn_preset("small"), pos, std::nullopt, kMu, kR);
  EXPECT_EQ(small.parameter_count(), 227u);
  const auto large = make_pinn(pinn_preset("large"), pos, std::nullopt, kMu, kR);
  EXPECT_EQ(large.parameter_count(), 30339u);
  EXPECT_THROW(pinn_preset("huge"), ConfigError);
}

TEST(Factory, CartesianUsesLargestRadiusAndRejectsOtherStages) {
  const PointList pos = {Vec3(kR, 0, 0), Vec3(0, 3 * kR, 0)};
  PinnSpec s = pinn_preset("small");
  s.pipeline.features = FeatureKind::kCartesian3;
  EXPECT_THROW(make_pinn(s, pos, std::nullopt, kMu, kR), ConfigError);
  s.pipeline.proxy = false;
  s.boundary.enabled = false;
  s.fusion = false;
  const auto m = make_pinn(s, pos, std::nullopt, kMu, kR);
  EXPECT_DOUBLE_EQ(m.constants().x_star, 3 * kR);
  EXPECT_EQ(m.params().arch.in_dim, 3);
}

TEST(Bundle, RoundTripReproducesField) {
  const auto m = make_model(true, true, true, 1.7, 3.0, -0.02);
  const std::string dir = test::scratch_dir("pinn_bundle");
  save_pinn_bundle(dir, m);
  EXPECT_TRUE(std::filesystem::exists(dir + "/model.json"));
  const auto r = load_pinn_bundle(dir);
  EXPECT_EQ(r.params().theta, m.params().theta);
  EXPECT_DOUBLE_EQ(r.boundary().k, 1.7);
  EXPECT_DOUBLE_EQ(r.boundary().r_ref, 3.0);
  for (double s : {0.5, 2.0, 40.0}) {
    const Vec3 x = Vec3(0.2, -0.7, 0.4).normalized() * s * kR;
    EXPECT_EQ(r.acceleration(x), m.acceleration(x));
  }
  EXPECT_THROW(load_pinn_bundle(dir + "/missing"), IoError);
}
