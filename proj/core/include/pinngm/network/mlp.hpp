/**
 * @file mlp.hpp
 * @brief Multilayer perceptrons with forward-mode input derivatives and a
 * hand-written reverse sweep over them.
 *
 * Two wirings are provided:
 *  - kGated: three GELU encoders of the input (embedding H0, and U, V), then
 *    depth-1 hidden layers H <- U + GELU(W H + b) (.) (V - U), then a linear
 *    scalar output. The embedding thereby reaches every hidden layer.
 *    `extra` trailing scalars are carried in the flat vector for the caller
 *    (the PINN pipeline stores its two transition parameters there).
 *  - kPlain: GELU layers in -> w -> ... -> w, then a linear output.
 */
#pragma once

#include <cstdint>
#include <string>

#include "pinngm/common/types.hpp"

namespace pinngm::network {

enum class Wiring { kGated, kPlain };

std::string to_string(Wiring wiring);
Wiring wiring_from_string(const std::string& name);

struct MlpArch {
  Wiring wiring = Wiring::kGated;
  int depth = 2;
  int width = 8;
  int in_dim = 5;
  int out_dim = 1;
  int extra = 2;

  bool operator==(const MlpArch&) const = default;
};

/// Closed-form parameter count. For the gated wiring with out_dim 1 and
/// extra 2 this is (d-1)(w^2+w) + 3w(f+1) + w + 3.
std::size_t parameter_count(const MlpArch& arch);

struct MlpParams {
  MlpArch arch;
  std::uint64_t seed = 0;
  VecX theta;

  std::size_t size() const { return static_cast<std::size_t>(theta.size()); }
  /// Trailing caller-owned scalars.
  double extra(int i) const { return theta[theta.size() - arch.extra + i]; }
  double& extra(int i) { return theta[theta.size() - arch.extra + i]; }
};

/// Glorot-uniform weights, zero biases, zero extras; deterministic by seed.
MlpParams init_params(const MlpArch& arch, std::uint64_t seed);
/// Gated network with scalar output and two extras.
MlpParams init_params(int depth, int width, int feature_dim, std::uint64_t seed);

/// Read-only views of individual layers inside the flat vector.
struct LayerView {
  Eigen::Map<const MatX> W;
  Eigen::Map<const VecX> b;
};
struct MutableLayerView {
  Eigen::Map<MatX> W;
  Eigen::Map<VecX> b;
};

/// Layer order: gated -> [embed, enc_u, enc_v, hidden_1..hidden_{d-1}, out];
/// plain -> [layer_0..layer_{d-1}, out].
int layer_count(const MlpArch& arch);
LayerView layer(const MlpParams& params, int index);
MutableLayerView layer(MlpArch arch, Eigen::Ref<VecX> flat, int index);

/// Intermediate activations kept by forward_jets for the reverse sweep.
struct JetCache {
  int n = 0;
  int order = 0;
  MatX X;
  std::vector<MatX> Z;  // pre-activations
  std::vector<MatX> A;  // post-activations
  MatX D;               // V - U (gated)
  std::vector<MatX> H;  // hidden-state inputs (gated)
};

/// X holds in_dim rows and jet_blocks(order) * n columns. Returns the output
/// jet (out_dim rows). Throws NumericalError naming the layer on non-finite
/// activations.
MatX forward_jets(const MlpParams& params, const MatX& X, int n, int order,
                  JetCache* cache = nullptr);

/// Given dL/dY for the output jet, accumulates dL/dtheta into grad (which has
/// the full flat length, extras untouched).
void backward_jets(const MlpParams& params, const JetCache& cache, const MatX& Ybar,
                   Eigen::Ref<VecX> grad);

/// Scalar output for a single feature vector.
double forward(const MlpParams& params, const VecX& features);

struct GradComputation {
  double value = 0.0;
  Vec3 input_gradient = Vec3::Zero();
  VecX parameter_gradient;  // d value / d theta, only when requested
};

/// value and (d output/d features) * jac for a single input, by pushing the
/// three columns of jac forward as tangents.
GradComputation value_and_input_grad(const MlpParams& params, const VecX& features,
                                     const Eigen::Matrix<double, Eigen::Dynamic, 3>& jac,
                                     bool with_parameter_gradient = false);

}  // namespace pinngm::network
