#include "pinngm/pinn/losses.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"

namespace pinngm::pinn {
namespace {

void check(const Mat3X& predicted, const Mat3X& target) {
  if (predicted.cols() != target.cols()) throw InvalidArgument("prediction/label count mismatch");
  if (predicted.cols() == 0) throw InvalidArgument("loss needs a non-empty batch");
}

}  // namespace

double loss_rms(const Mat3X& predicted, const Mat3X& target) {
  check(predicted, target);
  return (predicted - target).colwise().norm().mean();
}

double loss_rms_pct(const Mat3X& predicted, const Mat3X& target) {
  check(predicted, target);
  double pct = 0.0;
  for (Eigen::Index i = 0; i < target.cols(); ++i) {
    const double an = target.col(i).norm();
    if (!(an > 0.0)) {
      throw NumericalError("percent loss undefined: zero acceleration label at sample " +
                           std::to_string(i));
    }
    pct += (predicted.col(i) - target.col(i)).norm() / an;
  }
  return loss_rms(predicted, target) + pct / static_cast<double>(target.cols());
}

double loss_al(const Mat3X& predicted, const Mat3X& target, const VecX& laplacians) {
  if (laplacians.size() != target.cols()) throw InvalidArgument("Laplacian count mismatch");
  return loss_rms_pct(predicted, target) + laplacians.cwiseAbs().mean();
}

}  // namespace pinngm::pinn
