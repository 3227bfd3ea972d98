#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm/training/optim.hpp"
#include "pinngm/training/trainer.hpp"

namespace pinngm::training {

void Hyperparams::validate() const {
  if (!(learning_rate > 0.0) || batch_size < 1 || num_epochs < 0 || lr_patience < 1 ||
      !(decay_rate > 0.0 && decay_rate <= 1.0) || !(min_delta >= 0.0) || !(min_lr > 0.0) ||
      early_stop_patience < 1 || !(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw ConfigError("hyperparameters out of range");
  }
}

void write_history(const std::string& path, const TrainHistory& h) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path + "'");
  os << std::setprecision(17) << "epoch,train_loss,val_loss,lr\n";
  for (std::size_t e = 0; e < h.epochs(); ++e) {
    os << e << ',' << h.train_loss[e] << ',' << h.val_loss[e] << ',' << h.lr[e] << '\n';
  }
}

namespace {

// Batch temporaries are a few MB each; keep them on the heap instead of a
// fresh mmap per step.
void keep_large_blocks_on_heap() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
    return true;
  }();
  (void)once;
#endif
}

}  // namespace

TrainHistory optimize(VecX& theta, const Objective& obj, const Hyperparams& hp) {
  hp.validate();
  keep_large_blocks_on_heap();
  TrainHistory hist;
  if (hp.num_epochs == 0) {
    hist.stop_reason = "no epochs requested";
    return hist;
  }
  if (obj.n_train == 0) throw InvalidArgument("training set is empty");

  std::mt19937_64 rng(hp.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(obj.n_train);
  std::iota(order.begin(), order.end(), 0);

  AdamState adam;
  PlateauScheduler sched;
  sched.lr = hp.learning_rate;
  sched.factor = hp.decay_rate;
  sched.min_delta = hp.min_delta;
  sched.min_lr = hp.min_lr;
  sched.patience = hp.lr_patience;

  VecX best_theta = theta;
  double best_val = std::numeric_limits<double>::infinity();
  double es_best = std::numeric_limits<double>::infinity();
  int stale = 0;
  const auto t0 = std::chrono::steady_clock::now();
  VecX grad(theta.size());

  for (int epoch = 0; epoch < hp.num_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    const double lr = sched.lr;
    try {
      for (std::size_t start = 0; start < obj.n_train; start += static_cast<std::size_t>(hp.batch_size)) {
        const std::size_t stop = std::min(obj.n_train, start + static_cast<std::size_t>(hp.batch_size));
        const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                            order.begin() + static_cast<std::ptrdiff_t>(stop));
        grad.setZero();
        const double loss = obj.batch_loss(rows, &grad);
        if (!std::isfinite(loss)) throw NumericalError("non-finite training loss");
        loss_sum += loss * static_cast<double>(rows.size());
        adam_step(theta, grad, adam, lr);
        if (obj.project) obj.project(theta);
      }
    } catch (const NumericalError& e) {
      hist.diverged = true;
      hist.stop_reason = std::string("diverged in epoch ") + std::to_string(epoch) + ": " + e.what();
      log::warn(hist.stop_reason);
      break;
    }
    double val = 0.0;
    try {
      val = obj.validation_loss();
    } catch (const NumericalError& e) {
      val = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(val)) {
      hist.diverged = true;
      hist.stop_reason = "non-finite validation loss in epoch " + std::to_string(epoch);
      log::warn(hist.stop_reason);
      break;
    }
    hist.train_loss.push_back(loss_sum / static_cast<double>(obj.n_train));
    hist.val_loss.push_back(val);
    hist.lr.push_back(lr);
    hist.wall_time.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (val < best_val) {
      best_val = val;
      best_theta = theta;
      hist.best_epoch = epoch;
    }
    sched.update(val);
    if (improved(val, es_best, hp.min_delta) || !std::isfinite(es_best)) {
      es_best = val;
      stale = 0;
    } else if (++stale >= hp.early_stop_patience) {
      hist.stop_reason = "early stopping after epoch " + std::to_string(epoch);
      break;
    }
    if (epoch % 500 == 0) {
      log::info("epoch ", epoch, " train ", hist.train_loss.back(), " val ", val, " lr ", lr);
    }
  }
  if (hist.stop_reason.empty()) hist.stop_reason = "completed";
  if (hist.best_epoch >= 0) theta = best_theta;
  return hist;
}

}  // namespace pinngm::training
