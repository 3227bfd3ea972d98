/**
 * @file jet.hpp
 * @brief Truncated Taylor "jets" of matrix-valued activations and the fused
 * element-wise kernels (with their adjoints) used by the network.
 *
 * A jet of order o over a batch of N samples is a matrix whose columns hold
 * 1 + 3*o stacked blocks of N columns each:
 *   block 0      value
 *   blocks 1..3  first derivative along input direction j = x, y, z
 *   blocks 4..6  pure second derivative along direction j (order 2 only)
 */
#pragma once

#include "pinngm/common/types.hpp"

namespace pinngm::network {

inline constexpr int jet_blocks(int order) { return 1 + 3 * order; }

/// Exact (erf-based) GELU and its first four derivatives at z.
struct GeluDerivs {
  double g, d1, d2, d3;
};
GeluDerivs gelu_derivs(double z);
double gelu(double z);

/// Z = W X + b, where the bias enters block 0 only (derivatives of a constant
/// vanish).
void linear_jet(const Eigen::Ref<const MatX>& W, const Eigen::Ref<const VecX>& b, const MatX& X,
                int n, MatX& Z);

/// Accumulates dL/dW and dL/db and, when Xbar is non-null, writes dL/dX.
void linear_jet_backward(const Eigen::Ref<const MatX>& W, const MatX& X, const MatX& Zbar, int n,
                         Eigen::Ref<MatX> Wbar, Eigen::Ref<VecX> bbar, MatX* Xbar);

void gelu_jet(const MatX& Z, int n, int order, MatX& G);
void gelu_jet_backward(const MatX& Z, const MatX& Gbar, int n, int order, MatX& Zbar);

/// P = A (.) B with the product rule applied per block.
void mul_jet(const MatX& A, const MatX& B, int n, int order, MatX& P);
/// Adds dL/dA and dL/dB to Abar and Bbar.
void mul_jet_backward(const MatX& A, const MatX& B, const MatX& Pbar, int n, int order,
                      MatX& Abar, MatX& Bbar);

}  // namespace pinngm::network
