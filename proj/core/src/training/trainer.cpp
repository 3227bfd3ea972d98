#include "pinngm/training/trainer.hpp"

#include <algorithm>

#include "pinngm/common/error.hpp"
#include "pinngm/network/jet.hpp"

namespace pinngm::training {
namespace {

using network::Mat3X;

struct NdData {
  Mat3X x;
  Mat3X a;
};

NdData to_nd(const Dataset& d, const pinn::NonDimConstants& c) {
  NdData out;
  out.x.resize(3, static_cast<Eigen::Index>(d.size()));
  out.a.resize(3, static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.x.col(static_cast<Eigen::Index>(i)) = d.positions[i] / c.x_star;
    out.a.col(static_cast<Eigen::Index>(i)) = d.accelerations[i] / c.a_star;
  }
  return out;
}

Mat3X gather(const Mat3X& m, const std::vector<std::size_t>& rows) {
  Mat3X out(3, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = m.col(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

network::PipelineBatch gather(const network::PipelineBatch& full,
                              const std::vector<std::size_t>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index N = full.n;
  const int K = network::jet_blocks(full.order);
  network::PipelineBatch b;
  b.n = static_cast<int>(n);
  b.order = full.order;
  b.features.resize(full.features.rows(), K * n);
  b.coef.resize(n);
  b.target.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
    for (int blk = 0; blk < K; ++blk) b.features.col(blk * n + i) = full.features.col(blk * N + r);
    b.coef.c1[i] = full.coef.c1[r];
    b.coef.c0[i] = full.coef.c0[r];
    b.coef.dc1.col(i) = full.coef.dc1.col(r);
    b.coef.dc0.col(i) = full.coef.dc0.col(r);
    b.coef.ddc1.col(i) = full.coef.ddc1.col(r);
    b.coef.ddc0.col(i) = full.coef.ddc0.col(r);
    b.target.col(i) = full.target.col(r);
  }
  return b;
}

double chunked_loss(const pinn::PinnModel& model, const NdData& nd, network::LossKind kind) {
  const Eigen::Index n = nd.x.cols();
  constexpr Eigen::Index kChunk = 4096;
  double total = 0.0;
  for (Eigen::Index s = 0; s < n; s += kChunk) {
    const Eigen::Index m = std::min(kChunk, n - s);
    const auto res =
        model.loss_and_gradient(nd.x.middleCols(s, m), nd.a.middleCols(s, m), kind, false);
    total += res.loss * static_cast<double>(m);
  }
  return total / static_cast<double>(n);
}

}  // namespace

double evaluate_loss(const pinn::PinnModel& model, const Dataset& data, network::LossKind kind) {
  if (data.size() == 0) throw InvalidArgument("cannot evaluate a loss on an empty dataset");
  return chunked_loss(model, to_nd(data, model.constants()), kind);
}

PinnTrainResult train(const pinn::PinnModel& initial, const Dataset& data, const Hyperparams& hp) {
  data.validate();
  hp.validate();
  PinnTrainResult result{initial, {}};
  if (hp.num_epochs == 0) {
    result.history.stop_reason = "no epochs requested";
    return result;
  }
  auto [train_set, val_set] = split(data, hp.val_fraction, hp.seed);
  if (train_set.size() == 0) throw InvalidArgument("training split is empty");

  pinn::PinnModel& model = result.model;
  const NdData tr = to_nd(train_set, model.constants());
  const NdData va = val_set.size() > 0 ? to_nd(val_set, model.constants()) : tr;
  const int order = hp.loss == network::LossKind::kAl ? 2 : 1;
  const bool moving_coefficients = model.boundary().enabled && model.boundary().trainable;

  network::PipelineBatch full;
  network::PipelineBatch full_val;
  if (!moving_coefficients) {
    full = model.make_batch(tr.x, order);
    full.target = tr.a;
    full_val = model.make_batch(va.x, order);
    full_val.target = va.a;
  }

  Objective obj;
  obj.n_train = train_set.size();
  obj.batch_loss = [&](const std::vector<std::size_t>& rows, VecX* grad) {
    network::LossResult res;
    if (moving_coefficients) {
      res = model.loss_and_gradient(gather(tr.x, rows), gather(tr.a, rows), hp.loss, grad != nullptr);
    } else {
      res = model.loss_and_gradient(gather(full, rows), hp.loss, grad != nullptr);
    }
    if (grad != nullptr) *grad = res.grad;
    return res.loss;
  };
  obj.validation_loss = [&]() {
    if (moving_coefficients) return chunked_loss(model, va, hp.loss);
    return model.loss_and_gradient(full_val, hp.loss, false).loss;
  };
  if (moving_coefficients) {
    obj.project = [&](VecX&) { model.project_parameters(); };
  }
  result.history = optimize(model.mutable_params().theta, obj, hp);
  return result;
}

}  // namespace pinngm::training
