/**
 * @file trainer.hpp
 * @brief Mini-batch training loop with plateau scheduling, early stopping
 * and best-validation restoration.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pinngm/network/pipeline_loss.hpp"
#include "pinngm/pinn/pinn_model.hpp"
#include "pinngm/training/dataset.hpp"

namespace pinngm::training {

struct Hyperparams {
  double learning_rate = 1.0 / 256.0;  // 2^-8
  int batch_size = 2048;               // 2^11
  int num_epochs = 8192;               // 2^13
  int lr_patience = 1500;
  double decay_rate = 0.5;
  double min_delta = 0.001;
  double min_lr = 1e-6;
  int early_stop_patience = 3000;
  network::LossKind loss = network::LossKind::kRmsPercent;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;

  /// Throws ConfigError unless every field is in range.
  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> lr;
  std::vector<double> wall_time;
  int best_epoch = -1;
  bool diverged = false;
  std::string stop_reason;

  std::size_t epochs() const noexcept { return train_loss.size(); }
};

/// CSV `epoch,train_loss,val_loss,lr`.
void write_history(const std::string& path, const TrainHistory& history);

/// Problem-independent optimization loop over a flat parameter vector.
struct Objective {
  std::size_t n_train = 0;
  /// Mean loss over the given training rows; writes the gradient when non-null.
  std::function<double(const std::vector<std::size_t>& rows, VecX* grad)> batch_loss;
  std::function<double()> validation_loss;
  /// Optional projection applied after every update.
  std::function<void(VecX&)> project;
};

/// Runs the loop, leaving theta at the best-validation parameters.
TrainHistory optimize(VecX& theta, const Objective& objective, const Hyperparams& hp);

struct PinnTrainResult {
  pinn::PinnModel model;
  TrainHistory history;
};

/// Trains the PINN on SI data. Deterministic given hp.seed.
PinnTrainResult train(const pinn::PinnModel& initial, const Dataset& data, const Hyperparams& hp);

/// Mean loss of `model` over the SI samples in `data`.
double evaluate_loss(const pinn::PinnModel& model, const Dataset& data, network::LossKind kind);

}  // namespace pinngm::training
