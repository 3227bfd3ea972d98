#include "pinngm/regress/rls.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "pinngm/common/error.hpp"

namespace pinngm::regress {
namespace {

void check_pd(const MatX& K_inv) {
  for (Eigen::Index i = 0; i < K_inv.rows(); ++i) {
    if (!(K_inv(i, i) > 0.0) || !std::isfinite(K_inv(i, i))) {
      throw NumericalError("recursive least squares lost positive definiteness at index " +
                           std::to_string(i));
    }
  }
}

}  // namespace

RlsState rls_init(const MatX& H0, const MatX& y0, const MatX& Gamma) {
  if (H0.rows() != y0.rows() || Gamma.rows() != H0.cols() || Gamma.cols() != H0.cols()) {
    throw InvalidArgument("inconsistent RLS dimensions");
  }
  MatX K = H0.transpose() * H0 + Gamma;
  Eigen::LLT<MatX> llt(K);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("initial information matrix H0^T H0 + Gamma is not positive definite");
  }
  RlsState s;
  s.K_inv = llt.solve(MatX::Identity(K.rows(), K.cols()));
  s.K_inv = 0.5 * (s.K_inv + s.K_inv.transpose()).eval();
  s.c = llt.solve(H0.transpose() * y0);
  check_pd(s.K_inv);
  return s;
}

RlsState rls_prior(const MatX& Gamma, Eigen::Index rhs_cols) {
  Eigen::LLT<MatX> llt(Gamma);
  if (llt.info() != Eigen::Success) throw NumericalError("prior Gamma is not positive definite");
  RlsState s;
  s.K_inv = llt.solve(MatX::Identity(Gamma.rows(), Gamma.cols()));
  s.c = MatX::Zero(Gamma.rows(), rhs_cols);
  return s;
}

void rls_update(RlsState& s, const MatX& H, const MatX& y) {
  if (H.rows() == 0) return;
  if (H.cols() != s.K_inv.rows() || y.rows() != H.rows() || y.cols() != s.c.cols()) {
    throw InvalidArgument("RLS batch dimensions do not match the state");
  }
  const MatX KH = s.K_inv * H.transpose();  // n x b
  MatX inner = H * KH;
  inner.diagonal().array() += 1.0;
  Eigen::LDLT<MatX> ldlt(inner);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericalError("RLS inner matrix (I + H K^-1 H^T) is not invertible");
  }
  s.K_inv -= KH * ldlt.solve(KH.transpose());
  s.K_inv = 0.5 * (s.K_inv + s.K_inv.transpose()).eval();
  check_pd(s.K_inv);
  s.c += s.K_inv * (H.transpose() * (y - H * s.c));
}

MatX dense_regularized_solve(const MatX& H, const MatX& y, const MatX& Gamma) {
  MatX K = H.transpose() * H + Gamma;
  Eigen::LDLT<MatX> ldlt(K);
  if (ldlt.info() != Eigen::Success) throw NumericalError("dense regularized solve failed");
  return ldlt.solve(H.transpose() * y);
}

RlsState rls_stream(const MatX& H, const MatX& y, const MatX& Gamma, Eigen::Index rows_per_batch) {
  if (rows_per_batch < 1) throw InvalidArgument("batch size must be positive");
  if (Gamma.rows() != H.cols() || Gamma.cols() != H.cols()) {
    throw InvalidArgument("inconsistent RLS dimensions");
  }
  const Eigen::Index n = H.cols();
  const Eigen::Index total = H.rows();

  // Unit-diagonal equilibration of the information matrix; the solution is
  // mapped back at the end.
  VecX d = (H.colwise().squaredNorm().transpose() + Gamma.diagonal()).cwiseSqrt();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(d[j] > 0.0) || !std::isfinite(d[j])) d[j] = 1.0;
  }
  const VecX inv_d = d.cwiseInverse();
  const MatX Hs = H * inv_d.asDiagonal();
  const MatX Gs = inv_d.asDiagonal() * Gamma * inv_d.asDiagonal();

  Eigen::Index first = std::min(total, rows_per_batch);
  while (first < total && first < n) first = std::min(total, first + rows_per_batch);
  RlsState s = rls_init(Hs.topRows(first), y.topRows(first), Gs);
  for (Eigen::Index start = first; start < total; start += rows_per_batch) {
    const Eigen::Index m = std::min(rows_per_batch, total - start);
    rls_update(s, Hs.middleRows(start, m), y.middleRows(start, m));
  }
  s.c = inv_d.asDiagonal() * s.c;
  s.K_inv = inv_d.asDiagonal() * s.K_inv * inv_d.asDiagonal();
  return s;
}

}  // namespace pinngm::regress
