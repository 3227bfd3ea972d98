/**
 * @file test_network.cpp
 * @brief Parameter accounting, jets, reverse sweep, the affine pipeline and
 * parameter files.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pinngm/common/error.hpp"
#include "pinngm/network/jet.hpp"
#include "pinngm/network/mlp.hpp"
#include "pinngm/network/param_io.hpp"
#include "pinngm/network/pipeline_loss.hpp"
#include "test_support.hpp"

using namespace pinngm;
using namespace pinngm::network;

namespace {

// Inputs are an affine image of a 3-D point, features = A x + c, so the
// jets carry derivatives with respect to x.
struct AffineInput {
  MatX A;
  VecX c;
  VecX operator()(const Vec3& x) const { return A * x + c; }
};

AffineInput random_input(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AffineInput in{MatX(dim, 3), VecX(dim)};
  for (Eigen::Index i = 0; i < in.A.size(); ++i) in.A.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < in.c.size(); ++i) in.c[i] = u(rng);
  return in;
}

MatX input_jets(const AffineInput& in, const std::vector<Vec3>& xs, int order) {
  const int n = static_cast<int>(xs.size());
  MatX X = MatX::Zero(in.A.rows(), jet_blocks(order) * n);
  for (int i = 0; i < n; ++i) {
    X.col(i) = in(xs[i]);
    if (order == 0) continue;
    for (int j = 0; j < 3; ++j) X.col((1 + j) * n + i) = in.A.col(j);
  }
  return X;
}

MlpParams perturbed(const MlpArch& arch, std::uint64_t seed) {
  MlpParams p = init_params(arch, seed);
  std::mt19937_64 rng(seed + 100);
  std::normal_distribution<double> g(0.0, 0.1);
  for (Eigen::Index i = 0; i < p.theta.size(); ++i) p.theta[i] += g(rng);
  return p;
}

}  // namespace

TEST(ParameterCount, GatedSmallAndLarge) {
  EXPECT_EQ(parameter_count({Wiring::kGated, 2, 8, 5, 1, 2}), 227u);
  EXPECT_EQ(parameter_count({Wiring::kGated, 8, 64, 5, 1, 2}), 30339u);
  for (int d = 1; d <= 8; ++d) {
    for (int w : {4, 16, 32}) {
      const std::size_t f = 5;
      const std::size_t expected = (d - 1) * (w * w + w) + 3 * w * (f + 1) + w + 3;
      EXPECT_EQ(parameter_count({Wiring::kGated, d, w, 5, 1, 2}), expected);
      EXPECT_EQ(init_params({Wiring::kGated, d, w, 5, 1, 2}, 0).size(), expected);
    }
  }
}

TEST(ParameterCount, PlainBaseline) {
  EXPECT_EQ(parameter_count({Wiring::kPlain, 2, 12, 3, 3, 0}), 243u);
}

TEST(Init, DeterministicBySeedWithZeroBiasesAndExtras) {
  const MlpArch arch{Wiring::kGated, 3, 8, 5, 1, 2};
  const auto a = init_params(arch, 4);
  const auto b = init_params(arch, 4);
  const auto c = init_params(arch, 5);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_NE(a.theta, c.theta);
  EXPECT_EQ(a.extra(0), 0.0);
  EXPECT_EQ(a.extra(1), 0.0);
  for (int k = 0; k < layer_count(arch); ++k) {
    const auto L = layer(a, k);
    EXPECT_EQ(L.b.norm(), 0.0);
    const double limit = std::sqrt(6.0 / double(L.W.rows() + L.W.cols()));
    EXPECT_LE(L.W.cwiseAbs().maxCoeff(), limit);
  }
}

TEST(Init, RejectsDegenerateArchitecture) {
  EXPECT_THROW(init_params({Wiring::kGated, 0, 8, 5, 1, 2}, 0), InvalidArgument);
  EXPECT_THROW(wiring_from_string("conv"), InvalidArgument);
}

TEST(Gelu, DerivativesMatchFiniteDifferences) {
  for (double z : {-3.0, -1.2, -0.3, 0.0, 0.4, 1.7, 3.5}) {
    const auto d = gelu_derivs(z);
    const double h = 1e-4;
    EXPECT_NEAR(d.g, gelu(z), 1e-15);
    EXPECT_NEAR(d.g, 0.5 * z * std::erfc(-z / std::sqrt(2.0)), 1e-14);
    EXPECT_NEAR(d.d1, (gelu(z + h) - gelu(z - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(d.d2, (gelu_derivs(z + h).d1 - gelu_derivs(z - h).d1) / (2 * h), 1e-8);
    EXPECT_NEAR(d.d3, (gelu_derivs(z + h).d2 - gelu_derivs(z - h).d2) / (2 * h), 1e-8);
  }
}

TEST(Forward, ForwardJetsValueAgreesWithScalarForward) {
  const MlpArch arch{Wiring::kGated, 3, 8, 5, 1, 2};
  const auto p = perturbed(arch, 1);
  const auto in = random_input(5, 2);
  const std::vector<Vec3> xs = {Vec3(0.1, 0.2, 0.3), Vec3(-0.5, 0.4, 0.9)};
  const MatX Y = forward_jets(p, input_jets(in, xs, 0), 2, 0);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(Y(0, i), forward(p, in(xs[i])), 1e-14);
}

TEST(Forward, GatedSingleLayerByHand) {
  const MlpArch arch{Wiring::kGated, 1, 2, 1, 1, 0};
  auto p = init_params(arch, 0);
  // layers: embed, enc_u, enc_v, out
  auto set = [&](int k, std::vector<double> w, std::vector<double> b) {
    auto L = layer(arch, p.theta, k);
    for (std::size_t i = 0; i < w.size(); ++i) L.W.data()[i] = w[i];
    for (std::size_t i = 0; i < b.size(); ++i) L.b[i] = b[i];
  };
  set(0, {1.0, -1.0}, {0.0, 0.5});
  set(1, {0.5, 2.0}, {0.1, 0.0});
  set(2, {-1.0, 1.0}, {0.0, 0.0});
  set(3, {1.0, 2.0}, {0.3});
  // With depth 1 there are no gated hidden layers; the output reads the
  // embedding directly.
  const double x = 0.7;
  const double h0 = gelu(1.0 * x), h1 = gelu(-1.0 * x + 0.5);
  VecX in(1);
  in << x;
  EXPECT_NEAR(forward(p, in), h0 + 2.0 * h1 + 0.3, 1e-14);
}

class JetDerivatives : public ::testing::TestWithParam<Wiring> {};

TEST_P(JetDerivatives, FirstAndSecondDerivativesMatchFiniteDifferences) {
  const MlpArch arch{GetParam(), 3, 8, 5, 1, GetParam() == Wiring::kGated ? 2 : 0};
  const auto p = perturbed(arch, 3);
  const auto in = random_input(5, 4);
  const std::vector<Vec3> xs = {Vec3(0.3, -0.2, 0.5), Vec3(0.9, 0.1, -0.4), Vec3(-1, 2, 0.5)};
  const int n = 3;
  const MatX Y = forward_jets(p, input_jets(in, xs, 2), n, 2);
  ASSERT_EQ(Y.cols(), 7 * n);
  for (int i = 0; i < n; ++i) {
    auto f = [&](const Vec3& x) { return forward(p, in(x)); };
    const Vec3 g = test::fd_gradient(f, xs[i], 1e-5);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(Y(0, (1 + j) * n + i), g[j], 1e-8);
      Vec3 e = Vec3::Zero();
      e[j] = 1e-4;
      const double dd = (f(xs[i] + e) - 2 * f(xs[i]) + f(xs[i] - e)) / 1e-8;
      EXPECT_NEAR(Y(0, (4 + j) * n + i), dd, 1e-5);
    }
  }
}

TEST_P(JetDerivatives, ReverseSweepMatchesFiniteDifferences) {
  const MlpArch arch{GetParam(), 3, 6, 5, 1, GetParam() == Wiring::kGated ? 2 : 0};
  auto p = perturbed(arch, 5);
  const auto in = random_input(5, 6);
  const std::vector<Vec3> xs = {Vec3(0.3, -0.2, 0.5), Vec3(0.9, 0.1, -0.4)};
  const MatX X = input_jets(in, xs, 2);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  MatX Ybar(1, 7 * 2);
  for (Eigen::Index k = 0; k < Ybar.size(); ++k) Ybar.data()[k] = g(rng);

  JetCache cache;
  forward_jets(p, X, 2, 2, &cache);
  VecX grad = VecX::Zero(p.theta.size());
  backward_jets(p, cache, Ybar, grad);

  auto L = [&](const VecX& th) {
    MlpParams q = p;
    q.theta = th;
    return (forward_jets(q, X, 2, 2).array() * Ybar.array()).sum();
  };
  const VecX fd = test::fd_vector_gradient(L, p.theta, 1e-6);
  EXPECT_LT((grad - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
  if (arch.extra > 0) {
    EXPECT_EQ(grad[grad.size() - 1], 0.0);
    EXPECT_EQ(grad[grad.size() - 2], 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Wirings, JetDerivatives,
                         ::testing::Values(Wiring::kGated, Wiring::kPlain));

TEST(Forward, NonFiniteActivationIsReported) {
  const MlpArch arch{Wiring::kGated, 2, 4, 5, 1, 2};
  auto p = init_params(arch, 0);
  p.theta[0] = std::numeric_limits<double>::quiet_NaN();
  VecX x = VecX::Ones(5);
  EXPECT_THROW(forward(p, x), NumericalError);
}

TEST(InputGradient, MatchesFiniteDifferencesWithParameterGradient) {
  const MlpArch arch{Wiring::kGated, 3, 8, 5, 1, 2};
  const auto p = perturbed(arch, 8);
  const auto in = random_input(5, 9);
  const Vec3 x(0.2, 0.6, -0.3);
  const auto r = value_and_input_grad(p, in(x), in.A, true);
  EXPECT_NEAR(r.value, forward(p, in(x)), 1e-14);
  const Vec3 fd = test::fd_gradient([&](const Vec3& q) { return forward(p, in(q)); }, x, 1e-5);
  EXPECT_LT((r.input_gradient - fd).norm(), 1e-8);
  const VecX fdp = test::fd_vector_gradient(
      [&](const VecX& th) {
        MlpParams q = p;
        q.theta = th;
        return forward(q, in(x));
      },
      p.theta, 1e-6);
  EXPECT_LT((r.parameter_gradient - fdp).cwiseAbs().maxCoeff(), 1e-7);
}

namespace {

// Coefficients c1 = 1 + 0.1 |x|^2 and c0 = 0.3 x + 0.2 z^2, with their
// derivatives, for each point.
AffineCoefficients test_coefficients(const std::vector<Vec3>& xs) {
  AffineCoefficients c;
  c.resize(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vec3& x = xs[i];
    c.c1[i] = 1.0 + 0.1 * x.squaredNorm();
    c.c0[i] = 0.3 * x.x() + 0.2 * x.z() * x.z();
    c.dc1.col(i) = 0.2 * x;
    c.dc0.col(i) = Vec3(0.3, 0.0, 0.4 * x.z());
    c.ddc1.col(i) = Vec3::Constant(0.2);
    c.ddc0.col(i) = Vec3(0.0, 0.0, 0.4);
  }
  return c;
}

}  // namespace

TEST(Pipeline, AccelerationAndLaplacianOfAffineField) {
  const MlpArch arch{Wiring::kGated, 3, 8, 5, 1, 2};
  const auto p = perturbed(arch, 10);
  const auto in = random_input(5, 11);
  const std::vector<Vec3> xs = {Vec3(0.5, 0.1, -0.2), Vec3(-0.3, 0.8, 0.6)};
  PipelineBatch b;
  b.n = 2;
  b.order = 2;
  b.features = input_jets(in, xs, 2);
  b.coef = test_coefficients(xs);
  const auto out = evaluate_pipeline(p, b);
  for (int i = 0; i < 2; ++i) {
    auto U = [&](const Vec3& x) {
      return (1.0 + 0.1 * x.squaredNorm()) * forward(p, in(x)) + 0.3 * x.x() +
             0.2 * x.z() * x.z();
    };
    EXPECT_NEAR(out.potential[i], U(xs[i]), 1e-13);
    EXPECT_LT((out.acceleration.col(i) - test::fd_gradient(U, xs[i], 1e-5)).norm(), 1e-8);
    EXPECT_NEAR(out.laplacian[i], test::fd_laplacian(U, xs[i], 1e-4), 1e-5);
  }
}

class PipelineLoss : public ::testing::TestWithParam<LossKind> {};

TEST_P(PipelineLoss, ParameterGradientMatchesFiniteDifferences) {
  const MlpArch arch{Wiring::kGated, 2, 6, 5, 1, 2};
  const auto p = perturbed(arch, 12);
  const auto in = random_input(5, 13);
  const std::vector<Vec3> xs = {Vec3(0.5, 0.1, -0.2), Vec3(-0.3, 0.8, 0.6), Vec3(1, 1, 0)};
  PipelineBatch b;
  b.n = 3;
  b.order = GetParam() == LossKind::kAl ? 2 : 1;
  b.features = input_jets(in, xs, b.order);
  b.coef = test_coefficients(xs);
  b.target.resize(3, 3);
  b.target << 1.0, -0.5, 0.2, 0.3, 0.7, -1.0, -0.2, 0.4, 0.9;
  const auto r = loss_param_grad(p, b, GetParam());
  const VecX fd = test::fd_vector_gradient(
      [&](const VecX& th) {
        MlpParams q = p;
        q.theta = th;
        return loss_param_grad(q, b, GetParam(), false).loss;
      },
      p.theta, 1e-6);
  EXPECT_LT((r.grad - fd).cwiseAbs().maxCoeff(), 1e-7);

  // Coefficient adjoint, checked on c1 of sample 0.
  auto with_c1 = [&](double dc) {
    PipelineBatch q = b;
    q.coef.c1[0] += dc;
    return loss_param_grad(p, q, GetParam(), false).loss;
  };
  EXPECT_NEAR(r.coef_bar.c1[0], (with_c1(1e-6) - with_c1(-1e-6)) / 2e-6, 1e-7);
}

INSTANTIATE_TEST_SUITE_P(Kinds, PipelineLoss,
                         ::testing::Values(LossKind::kRms, LossKind::kRmsPercent, LossKind::kAl));

TEST(Pipeline, PercentLossRejectsZeroLabel) {
  const MlpArch arch{Wiring::kGated, 2, 4, 5, 1, 2};
  const auto p = init_params(arch, 0);
  const auto in = random_input(5, 1);
  PipelineBatch b;
  b.n = 1;
  b.order = 1;
  b.features = input_jets(in, {Vec3(0.1, 0.2, 0.3)}, 1);
  b.coef = test_coefficients({Vec3(0.1, 0.2, 0.3)});
  b.target = Mat3X::Zero(3, 1);
  EXPECT_THROW(loss_param_grad(p, b, LossKind::kRmsPercent), NumericalError);
  EXPECT_NO_THROW(loss_param_grad(p, b, LossKind::kRms));
  EXPECT_THROW(loss_param_grad(p, b, LossKind::kAl), InvalidArgument);
}

TEST(ParamIo, RoundTripIsBitExact) {
  const auto p = perturbed({Wiring::kGated, 3, 8, 5, 1, 2}, 14);
  std::stringstream ss;
  write_params(ss, p);
  const auto q = read_params(ss);
  EXPECT_EQ(q.arch, p.arch);
  EXPECT_EQ(q.seed, p.seed);
  EXPECT_EQ(q.theta, p.theta);
}

TEST(ParamIo, RejectsCorruptStreams) {
  const auto p = init_params({Wiring::kPlain, 2, 4, 3, 3, 0}, 1);
  std::stringstream ss;
  write_params(ss, p);
  std::string bytes = ss.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(read_params(truncated), IoError);
  bytes[0] = 'X';
  std::istringstream bad_magic(bytes);
  EXPECT_THROW(read_params(bad_magic), IoError);
  EXPECT_THROW(read_params_file("/nonexistent/params.bin"), IoError);
}
