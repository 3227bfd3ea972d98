/**
 * @file test_training.cpp
 * @brief Datasets, Adam, the plateau schedule, the optimization loop and the
 * PINN and baseline trainers.
 */
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pinngm/analytic/point_mass.hpp"
#include "pinngm/analytic/spherical_harmonics.hpp"
#include "pinngm/common/error.hpp"
#include "pinngm/geometry/mesh_builders.hpp"
#include "pinngm/geometry/sampling.hpp"
#include "pinngm/pinn/factory.hpp"
#include "pinngm/training/dataset.hpp"
#include "pinngm/training/optim.hpp"
#include "pinngm/training/tnn.hpp"
#include "pinngm/training/trainer.hpp"
#include "test_support.hpp"

using namespace pinngm;
using namespace pinngm::training;

namespace {

constexpr double kMu = 4.463e5;
constexpr double kR = 16000.0;

Dataset j2_dataset(std::size_t n, std::uint64_t seed, double r_min = 1.0, double r_max = 5.0) {
  const auto truth = analytic::make_point_mass_j2(kMu, kR, -0.05);
  DatasetMeta meta;
  meta.seed = seed;
  meta.r_min = r_min;
  meta.r_max = r_max;
  meta.truth = "point_mass_j2";
  meta.R = kR;
  meta.mu = kMu;
  return label_points(truth, geometry::sample_shell(kR, r_min, r_max, n, seed), meta);
}

}  // namespace

TEST(Dataset, CsvRoundTripKeepsValuesAndMetadata) {
  auto d = j2_dataset(50, 1, 0.5, 3.0);
  d.interior[3] = true;
  d.interior[17] = true;
  const std::string dir = test::scratch_dir("dataset_io");
  write_dataset(dir + "/data.csv", d);
  const auto r = read_dataset(dir + "/data.csv");
  ASSERT_EQ(r.size(), d.size());
  EXPECT_EQ(r.positions, d.positions);
  EXPECT_EQ(r.accelerations, d.accelerations);
  ASSERT_TRUE(r.potentials.has_value());
  EXPECT_EQ(*r.potentials, *d.potentials);
  EXPECT_EQ(r.interior, d.interior);
  EXPECT_EQ(r.meta.seed, 1u);
  EXPECT_DOUBLE_EQ(r.meta.r_max, 3.0);
  EXPECT_EQ(r.meta.truth, "point_mass_j2");
  EXPECT_EQ(r.exterior_only().size(), d.size() - 2);
}

TEST(Dataset, RejectsBadFiles) {
  const std::string dir = test::scratch_dir("dataset_bad");
  EXPECT_THROW(read_dataset(dir + "/missing.csv"), IoError);
  std::ofstream(dir + "/h.csv") << "a,b,c\n1,2,3\n";
  EXPECT_THROW(read_dataset(dir + "/h.csv"), IoError);
  std::ofstream(dir + "/r.csv") << "x,y,z,ax,ay,az\n1,2,3,4,5\n";
  EXPECT_THROW(read_dataset(dir + "/r.csv"), IoError);
}

TEST(Dataset, ValidationCatchesRaggedAndNonFinite) {
  auto d = j2_dataset(5, 2);
  d.accelerations.pop_back();
  EXPECT_THROW(d.validate(), InvalidArgument);
  auto e = j2_dataset(5, 2);
  e.positions[1].x() = std::numeric_limits<double>::infinity();
  EXPECT_THROW(e.validate(), InvalidArgument);
}

TEST(Dataset, InteriorFlagsFromShape) {
  const auto shape = geometry::make_box(kR / 2, kR / 2, kR / 2);
  const analytic::PointMassModel pm(kMu);
  const PointList pts = {Vec3(0.1 * kR, 0, 0), Vec3(2 * kR, 0, 0)};
  const auto d = label_points(pm, pts, {}, shape);
  EXPECT_EQ(d.interior, (std::vector<bool>{true, false}));
}

TEST(Noise, PerturbationHasExactRelativeMagnitude) {
  const auto d = j2_dataset(1000, 3);
  const auto n = add_noise(d, 0.1, 4);
  EXPECT_DOUBLE_EQ(n.meta.noise, 0.1);
  Vec3 mean_dir = Vec3::Zero();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec3 delta = n.accelerations[i] - d.accelerations[i];
    EXPECT_NEAR(delta.norm(), 0.1 * d.accelerations[i].norm(), 1e-12 * d.accelerations[i].norm());
    mean_dir += delta.normalized() / double(d.size());
  }
  EXPECT_LT(mean_dir.norm(), 0.1);
  EXPECT_EQ(add_noise(d, 0.1, 4).accelerations, n.accelerations);
  EXPECT_EQ(add_noise(d, 0.0, 4).accelerations, d.accelerations);
  EXPECT_THROW(add_noise(d, -0.1, 4), InvalidArgument);
}

TEST(Split, SizesPartitionAndDeterminism) {
  const auto d = j2_dataset(101, 5);
  const auto [tr, va] = split(d, 0.1, 6);
  EXPECT_EQ(va.size(), 10u);
  EXPECT_EQ(tr.size(), 91u);
  std::set<std::tuple<double, double, double>> all;
  for (const auto* part : {&tr, &va}) {
    for (const auto& p : part->positions) all.insert({p.x(), p.y(), p.z()});
  }
  EXPECT_EQ(all.size(), 101u);
  EXPECT_EQ(split(d, 0.1, 6).second.positions, va.positions);
  EXPECT_NE(split(d, 0.1, 7).second.positions, va.positions);
  EXPECT_THROW(split(d, 1.0, 0), InvalidArgument);
}

TEST(Adam, FirstTwoStepsByHand) {
  VecX theta(2), g1(2), g2(2);
  theta << 1.0, -2.0;
  g1 << 0.5, -4.0;
  g2 << -1.0, 2.0;
  AdamState s;
  adam_step(theta, g1, s, 0.01);
  // After one step m_hat = g and v_hat = g^2.
  EXPECT_NEAR(theta[0], 1.0 - 0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(theta[1], -2.0 + 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
  adam_step(theta, g2, s, 0.01);
  for (int i = 0; i < 2; ++i) {
    const double m = 0.9 * 0.1 * g1[i] + 0.1 * g2[i];
    const double v = 0.999 * 0.001 * g1[i] * g1[i] + 0.001 * g2[i] * g2[i];
    const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
    const double first = i == 0 ? 1.0 - 0.01 * 0.5 / (0.5 + 1e-8) : -2.0 + 0.01 * 4.0 / (4.0 + 1e-8);
    EXPECT_NEAR(theta[i], first - 0.01 * mh / (std::sqrt(vh) + 1e-8), 1e-14);
  }
  EXPECT_EQ(s.step, 2);
  VecX bad(2);
  bad << 1.0, std::nan("");
  EXPECT_THROW(adam_step(theta, bad, s, 0.01), NumericalError);
}

TEST(Plateau, ReducesAfterPatienceAndRespectsFloor) {
  PlateauScheduler s;
  s.lr = 1.0;
  s.factor = 0.5;
  s.patience = 2;
  s.min_delta = 0.01;
  s.min_lr = 0.2;
  EXPECT_EQ(s.update(10.0), 1.0);
  EXPECT_EQ(s.update(9.95), 1.0);  // within the relative margin: no improvement
  EXPECT_EQ(s.update(9.95), 0.5);
  EXPECT_EQ(s.update(5.0), 0.5);   // improvement resets the wait
  EXPECT_EQ(s.update(5.0), 0.5);
  EXPECT_EQ(s.update(5.0), 0.25);
  EXPECT_EQ(s.update(5.0), 0.25);
  EXPECT_EQ(s.update(5.0), 0.2);
  EXPECT_TRUE(improved(0.98, 1.0, 0.01));
  EXPECT_FALSE(improved(0.995, 1.0, 0.01));
}

TEST(Hyperparams, Validation) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.validate());
  EXPECT_EQ(hp.batch_size, 2048);
  EXPECT_EQ(hp.num_epochs, 8192);
  EXPECT_DOUBLE_EQ(hp.learning_rate, 1.0 / 256.0);
  hp.batch_size = 0;
  EXPECT_THROW(hp.validate(), ConfigError);
  hp = {};
  hp.val_fraction = 1.0;
  EXPECT_THROW(hp.validate(), ConfigError);
  hp = {};
  hp.decay_rate = 1.5;
  EXPECT_THROW(hp.validate(), ConfigError);
}

namespace {

// Mean squared distance to a set of target points; the minimizer is their mean.
Objective quadratic(const std::vector<VecX>& targets, const VecX& theta_ref, VecX& theta) {
  Objective o;
  o.n_train = targets.size();
  o.batch_loss = [&targets, &theta](const std::vector<std::size_t>& rows, VecX* grad) {
    double loss = 0.0;
    for (std::size_t r : rows) {
      loss += (theta - targets[r]).squaredNorm();
      if (grad) *grad += 2.0 * (theta - targets[r]) / double(rows.size());
    }
    return loss / double(rows.size());
  };
  o.validation_loss = [&theta, theta_ref]() { return (theta - theta_ref).squaredNorm(); };
  return o;
}

}  // namespace

TEST(Optimize, ConvergesOnQuadratic) {
  std::vector<VecX> targets;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  VecX mean = VecX::Zero(4);
  for (int i = 0; i < 64; ++i) {
    VecX t(4);
    for (int j = 0; j < 4; ++j) t[j] = 3.0 + g(rng);
    targets.push_back(t);
    mean += t / 64.0;
  }
  VecX theta = VecX::Zero(4);
  Hyperparams hp;
  hp.learning_rate = 0.05;
  hp.batch_size = 16;
  hp.num_epochs = 400;
  hp.lr_patience = 20;
  hp.early_stop_patience = 1000;
  const auto hist = optimize(theta, quadratic(targets, mean, theta), hp);
  EXPECT_FALSE(hist.diverged);
  EXPECT_EQ(hist.epochs(), 400u);
  EXPECT_LT((theta - mean).norm(), 1e-2);
  EXPECT_LT(hist.lr.back(), hist.lr.front());
}

TEST(Optimize, EarlyStoppingAndBestRestoration) {
  VecX theta = VecX::Zero(1);
  int calls = 0;
  Objective o;
  o.n_train = 4;
  o.batch_loss = [](const std::vector<std::size_t>&, VecX* grad) {
    if (grad) (*grad)[0] = -1.0;
    return 1.0;
  };
  // Validation improves for 3 epochs and then gets worse.
  o.validation_loss = [&]() {
    ++calls;
    return calls <= 3 ? 10.0 - calls : 10.0 + calls;
  };
  Hyperparams hp;
  hp.batch_size = 4;
  hp.num_epochs = 100;
  hp.early_stop_patience = 5;
  const auto hist = optimize(theta, o, hp);
  EXPECT_EQ(hist.best_epoch, 2);
  EXPECT_EQ(hist.epochs(), 8u);
  EXPECT_NE(hist.stop_reason.find("early stopping"), std::string::npos);
  // Three Adam steps of size lr with a constant gradient.
  EXPECT_NEAR(theta[0], 3.0 * hp.learning_rate, 1e-9);
}

TEST(Optimize, DivergenceIsReportedAndBestKept) {
  VecX theta = VecX::Zero(1);
  int epoch = 0;
  Objective o;
  o.n_train = 1;
  o.batch_loss = [&](const std::vector<std::size_t>&, VecX* grad) {
    if (grad) (*grad)[0] = 1.0;
    return epoch++ < 3 ? 1.0 : std::nan("");
  };
  o.validation_loss = [&]() { return 1.0 / (1.0 + epoch); };
  Hyperparams hp;
  hp.batch_size = 1;
  hp.num_epochs = 50;
  const auto hist = optimize(theta, o, hp);
  EXPECT_TRUE(hist.diverged);
  EXPECT_EQ(hist.epochs(), 3u);
  EXPECT_EQ(hist.best_epoch, 2);
  EXPECT_NEAR(theta[0], -3.0 * hp.learning_rate, 1e-9);
}

TEST(History, CsvLayout) {
  TrainHistory h;
  h.train_loss = {1.0, 0.5};
  h.val_loss = {1.1, 0.6};
  h.lr = {0.1, 0.1};
  const std::string dir = test::scratch_dir("history");
  write_history(dir + "/h.csv", h);
  std::ifstream is(dir + "/h.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "epoch,train_loss,val_loss,lr");
  std::getline(is, line);
  EXPECT_EQ(line, "0,1,1.1000000000000001,0.10000000000000001");
}

TEST(TrainPinn, ReducesLossAndIsDeterministic) {
  const auto data = j2_dataset(600, 8);
  pinn::PinnSpec spec = pinn::pinn_preset("small");
  spec.seed = 3;
  const auto initial = pinn::make_pinn(spec, data.positions, data.potentials, kMu, kR);
  Hyperparams hp;
  hp.num_epochs = 60;
  hp.batch_size = 128;
  hp.learning_rate = 1.0 / 128.0;
  hp.seed = 4;
  const auto a = train(initial, data, hp);
  const auto b = train(initial, data, hp);
  EXPECT_EQ(a.model.params().theta, b.model.params().theta);
  EXPECT_LT(evaluate_loss(a.model, data, hp.loss), evaluate_loss(initial, data, hp.loss));
  EXPECT_EQ(a.history.epochs(), 60u);
  EXPECT_GE(a.model.boundary().r_ref, 1.0);
  EXPECT_GT(a.model.boundary().k, 0.0);
}

TEST(TrainPinn, ZeroEpochsReturnsInitialModel) {
  const auto data = j2_dataset(50, 9);
  const auto initial =
      pinn::make_pinn(pinn::pinn_preset("small"), data.positions, data.potentials, kMu, kR);
  Hyperparams hp;
  hp.num_epochs = 0;
  const auto r = train(initial, data, hp);
  EXPECT_EQ(r.model.params().theta, initial.params().theta);
  EXPECT_EQ(r.history.epochs(), 0u);
}

TEST(MinMaxScaling, MapsToUnitBoxAndBack) {
  const std::vector<Vec3> v = {Vec3(1, -2, 5), Vec3(3, 0, 5), Vec3(2, 4, 5)};
  const auto m = MinMax::fit(v);
  EXPECT_EQ(m.forward(Vec3(1, -2, 5)), Vec3(0, 0, 0));
  EXPECT_EQ(m.forward(Vec3(3, 4, 5)).head<2>(), Eigen::Vector2d(1, 1));
  for (const auto& x : v) EXPECT_LT((m.inverse(m.forward(x)) - x).norm(), 1e-15);
  EXPECT_THROW(MinMax::fit({}), InvalidArgument);
}

TEST(Tnn, TrainsAndRoundTrips) {
  const auto data = j2_dataset(800, 10);
  Hyperparams hp;
  hp.num_epochs = 150;
  hp.batch_size = 64;
  hp.learning_rate = 1.0 / 128.0;
  hp.seed = 11;
  const auto r = train_tnn(data, hp, {2, 12});
  EXPECT_EQ(r.model.parameter_count(), 243u);
  EXPECT_LT(r.history.val_loss.back(), r.history.val_loss.front());
  EXPECT_TRUE(std::isnan(r.model.evaluate(data.positions[0]).U));

  const std::string dir = test::scratch_dir("tnn_bundle");
  save_tnn_bundle(dir, r.model);
  const auto l = load_tnn_bundle(dir);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(l.acceleration(data.positions[i]), r.model.acceleration(data.positions[i]));
  }
  const auto batched = r.model.accelerations(data.positions);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_LT((batched[i] - r.model.acceleration(data.positions[i])).norm(),
              1e-12 * batched[i].norm());
  }
}
