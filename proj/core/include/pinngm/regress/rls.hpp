/**
 * @file rls.hpp
 * @brief Regularized recursive least squares.
 *
 * Solves min ||H c - y||^2 + c^T Gamma c by streaming batches of rows:
 *   K_0^-1     = (H_0^T H_0 + Gamma)^-1,  c_0 = K_0^-1 H_0^T y_0
 *   K_{i+1}^-1 = K_i^-1 - K_i^-1 H^T (I + H K_i^-1 H^T)^-1 H K_i^-1
 *   c_{i+1}    = c_i + K_{i+1}^-1 H^T (y - H c_i)
 * The right-hand side may have several columns sharing one K.
 */
#pragma once

#include "pinngm/common/types.hpp"

namespace pinngm::regress {

struct RlsState {
  MatX K_inv;
  MatX c;
};

/// Initializes from a first block; throws NumericalError when
/// H0^T H0 + Gamma is not positive definite.
RlsState rls_init(const MatX& H0, const MatX& y0, const MatX& Gamma);

/// State with no data yet: K^-1 = Gamma^-1 (Gamma must be positive definite).
RlsState rls_prior(const MatX& Gamma, Eigen::Index rhs_cols);

/// One recursion step. An empty batch leaves the state unchanged.
void rls_update(RlsState& state, const MatX& H, const MatX& y);

/// Dense regularized solve used as a reference: (H^T H + Gamma) c = H^T y.
MatX dense_regularized_solve(const MatX& H, const MatX& y, const MatX& Gamma);

/// Streams rows of (H, y) in blocks of `rows_per_batch`: the first block is
/// grown until it has at least as many rows as unknowns, then the recursion
/// consumes the rest. Columns are rescaled to a unit-diagonal information
/// matrix while streaming; the returned state is in the original scaling.
RlsState rls_stream(const MatX& H, const MatX& y, const MatX& Gamma, Eigen::Index rows_per_batch);

}  // namespace pinngm::regress
