/**
 * @file pipeline_loss.hpp
 * @brief Potential, acceleration and Laplacian of a field that is affine in
 * the network output, U(x) = c1(x) y(x) + c0(x), and the training losses built
 * on them.
 *
 * The caller supplies, per sample, the feature jets and the coefficient
 * functions c1, c0 together with their first and pure second derivatives
 * along each axis. The losses are differentiated with respect to the network
 * parameters (reverse sweep over the forward-mode jets) and with respect to
 * the coefficients, so a caller whose coefficients carry their own trainable
 * parameters can chain the rule further.
 */
#pragma once

#include "pinngm/common/types.hpp"
#include "pinngm/network/mlp.hpp"

namespace pinngm::network {

using Mat3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;

enum class LossKind { kRms, kRmsPercent, kAl };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct AffineCoefficients {
  VecX c1;
  VecX c0;
  Mat3X dc1;   // d c1 / d x_j
  Mat3X dc0;   // d c0 / d x_j
  Mat3X ddc1;  // d^2 c1 / d x_j^2
  Mat3X ddc0;  // d^2 c0 / d x_j^2

  void resize(Eigen::Index n);
  void set_zero(Eigen::Index n);
};

struct PipelineBatch {
  int n = 0;
  int order = 1;   // 1 for accelerations, 2 when Laplacians are needed
  MatX features;   // feature jets, in_dim x jet_blocks(order) * n
  AffineCoefficients coef;
  Mat3X target;    // target accelerations (may be empty for pure evaluation)
};

struct PipelineOutputs {
  VecX potential;
  Mat3X acceleration;
  VecX laplacian;  // filled when order == 2
};

PipelineOutputs evaluate_pipeline(const MlpParams& params, const PipelineBatch& batch);

struct LossResult {
  double loss = 0.0;
  VecX grad;                     // d loss / d theta (full flat length)
  AffineCoefficients coef_bar;   // d loss / d coefficients
};

/// Batch means of |a_hat - a| (+ |a_hat - a|/|a|) (+ |laplacian|).
/// Throws NumericalError naming the sample for zero-magnitude labels in the
/// percent term or non-finite per-sample terms.
LossResult loss_param_grad(const MlpParams& params, const PipelineBatch& batch, LossKind kind,
                           bool with_gradient = true);

}  // namespace pinngm::network
