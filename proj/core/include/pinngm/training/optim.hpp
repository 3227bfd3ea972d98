/**
 * @file optim.hpp
 * @brief Adam and a reduce-on-plateau learning-rate schedule.
 */
#pragma once

#include "pinngm/common/types.hpp"

namespace pinngm::training {

struct AdamState {
  VecX m;
  VecX v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update in place. Throws NumericalError for a
/// non-finite gradient.
void adam_step(VecX& params, const VecX& grad, AdamState& state, double lr);

struct PlateauScheduler {
  double lr = 1.0 / 256.0;
  double factor = 0.5;
  double min_delta = 0.001;  // relative
  double min_lr = 1e-6;
  int patience = 1500;

  double best = 0.0;
  bool has_best = false;
  int wait = 0;

  /// Feeds one validation loss and returns the (possibly reduced) rate.
  double update(double val_loss);
};

/// True when `value` improves on `best` by the relative margin min_delta.
bool improved(double value, double best, double min_delta);

}  // namespace pinngm::training
