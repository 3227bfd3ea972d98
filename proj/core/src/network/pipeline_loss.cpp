#include "pinngm/network/pipeline_loss.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"
#include "pinngm/network/jet.hpp"

namespace pinngm::network {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kRms: return "rms";
    case LossKind::kRmsPercent: return "rms_percent";
    case LossKind::kAl: return "al";
  }
  return "rms";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "rms") return LossKind::kRms;
  if (name == "rms_percent" || name == "rms+%") return LossKind::kRmsPercent;
  if (name == "al") return LossKind::kAl;
  throw InvalidArgument("unknown loss kind '" + name + "'");
}

void AffineCoefficients::resize(Eigen::Index n) {
  c1.resize(n);
  c0.resize(n);
  dc1.resize(3, n);
  dc0.resize(3, n);
  ddc1.resize(3, n);
  ddc0.resize(3, n);
}

void AffineCoefficients::set_zero(Eigen::Index n) {
  c1 = VecX::Zero(n);
  c0 = VecX::Zero(n);
  dc1 = Mat3X::Zero(3, n);
  dc0 = Mat3X::Zero(3, n);
  ddc1 = Mat3X::Zero(3, n);
  ddc0 = Mat3X::Zero(3, n);
}

namespace {

PipelineOutputs combine(const MatX& Y, const PipelineBatch& b) {
  const int n = b.n;
  const auto& c = b.coef;
  PipelineOutputs out;
  out.potential.resize(n);
  out.acceleration.resize(3, n);
  if (b.order == 2) out.laplacian.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y0 = Y(0, i);
    out.potential[i] = c.c1[i] * y0 + c.c0[i];
    double lap = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double yj = Y(0, (j + 1) * n + i);
      out.acceleration(j, i) = c.c1[i] * yj + c.dc1(j, i) * y0 + c.dc0(j, i);
      if (b.order == 2) {
        const double yjj = Y(0, (j + 4) * n + i);
        lap += c.c1[i] * yjj + 2.0 * c.dc1(j, i) * yj + c.ddc1(j, i) * y0 + c.ddc0(j, i);
      }
    }
    if (b.order == 2) out.laplacian[i] = lap;
  }
  return out;
}

}  // namespace

PipelineOutputs evaluate_pipeline(const MlpParams& params, const PipelineBatch& batch) {
  const MatX Y = forward_jets(params, batch.features, batch.n, batch.order);
  return combine(Y, batch);
}

LossResult loss_param_grad(const MlpParams& params, const PipelineBatch& batch, LossKind kind,
                           bool with_gradient) {
  const int n = batch.n;
  if (n <= 0) throw InvalidArgument("loss needs a non-empty batch");
  if (kind == LossKind::kAl && batch.order < 2) {
    throw InvalidArgument("the Laplacian loss needs second-order feature jets");
  }
  if (batch.target.cols() != n) throw InvalidArgument("target count does not match batch");

  JetCache cache;
  const MatX Y = forward_jets(params, batch.features, n, batch.order,
                              with_gradient ? &cache : nullptr);
  const PipelineOutputs out = combine(Y, batch);
  const bool pct = kind != LossKind::kRms;
  const bool lap = kind == LossKind::kAl;
  const double inv_n = 1.0 / n;

  LossResult res;
  MatX Ybar;
  if (with_gradient) {
    Ybar = MatX::Zero(1, Y.cols());
    res.coef_bar.set_zero(n);
  }
  const auto& c = batch.coef;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 e = out.acceleration.col(i) - batch.target.col(i);
    const double en = e.norm();
    double term = en;
    double scale = 1.0;
    if (pct) {
      const double an = batch.target.col(i).norm();
      if (!(an > 0.0)) {
        throw NumericalError("percent loss undefined: zero acceleration label at sample " +
                             std::to_string(i));
      }
      term += en / an;
      scale += 1.0 / an;
    }
    double L = 0.0;
    if (lap) {
      L = out.laplacian[i];
      term += std::abs(L);
    }
    if (!std::isfinite(term)) {
      throw NumericalError("non-finite loss at sample " + std::to_string(i));
    }
    total += term;
    if (!with_gradient) continue;

    const double y0 = Y(0, i);
    if (en > 0.0) {
      const Vec3 abar = inv_n * scale / en * e;
      for (int j = 0; j < 3; ++j) {
        const double yj = Y(0, (j + 1) * n + i);
        Ybar(0, (j + 1) * n + i) += abar[j] * c.c1[i];
        Ybar(0, i) += abar[j] * c.dc1(j, i);
        res.coef_bar.c1[i] += abar[j] * yj;
        res.coef_bar.dc1(j, i) += abar[j] * y0;
        res.coef_bar.dc0(j, i) += abar[j];
      }
    }
    if (lap && L != 0.0) {
      const double lbar = inv_n * (L > 0.0 ? 1.0 : -1.0);
      for (int j = 0; j < 3; ++j) {
        const double yj = Y(0, (j + 1) * n + i);
        const double yjj = Y(0, (j + 4) * n + i);
        Ybar(0, (j + 4) * n + i) += lbar * c.c1[i];
        Ybar(0, (j + 1) * n + i) += 2.0 * lbar * c.dc1(j, i);
        Ybar(0, i) += lbar * c.ddc1(j, i);
        res.coef_bar.c1[i] += lbar * yjj;
        res.coef_bar.dc1(j, i) += 2.0 * lbar * yj;
        res.coef_bar.ddc1(j, i) += lbar * y0;
        res.coef_bar.ddc0(j, i) += lbar;
      }
    }
  }
  res.loss = total * inv_n;
  if (with_gradient) {
    res.grad = VecX::Zero(params.theta.size());
    backward_jets(params, cache, Ybar, res.grad);
  }
  return res;
}

}  // namespace pinngm::network
