#include "pinngm/training/optim.hpp"

#include <algorithm>
#include <cmath>

#include "pinngm/common/error.hpp"

namespace pinngm::training {

void adam_step(VecX& params, const VecX& grad, AdamState& s, double lr) {
  if (grad.size() != params.size()) throw InvalidArgument("gradient and parameters differ in size");
  if (!grad.allFinite()) {
    throw NumericalError("non-finite gradient at optimizer step " + std::to_string(s.step + 1));
  }
  if (s.m.size() != params.size()) {
    s.m = VecX::Zero(params.size());
    s.v = VecX::Zero(params.size());
  }
  ++s.step;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * grad;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  params.array() -= lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.eps);
}

bool improved(double value, double best, double min_delta) {
  return value < best - min_delta * std::abs(best);
}

double PlateauScheduler::update(double val_loss) {
  if (!has_best || improved(val_loss, best, min_delta)) {
    best = val_loss;
    has_best = true;
    wait = 0;
    return lr;
  }
  if (++wait >= patience) {
    lr = std::max(lr * factor, min_lr);
    wait = 0;
  }
  return lr;
}

}  // namespace pinngm::training
