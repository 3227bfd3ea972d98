#include "pinngm/network/jet.hpp"

#include <cmath>
#include <numbers>

namespace pinngm::network {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

GeluDerivs gelu_derivs(double z) {
  const double Phi = 0.5 * std::erfc(-z * kInvSqrt2);
  const double phi = kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return {z * Phi, Phi + z * phi, phi * (2.0 - z * z), phi * (z * z * z - 4.0 * z)};
}

double gelu(double z) { return z * 0.5 * std::erfc(-z * kInvSqrt2); }

void linear_jet(const Eigen::Ref<const MatX>& W, const Eigen::Ref<const VecX>& b, const MatX& X,
                int n, MatX& Z) {
  Z.noalias() = W * X;
  Z.leftCols(n).colwise() += b;
}

void linear_jet_backward(const Eigen::Ref<const MatX>& W, const MatX& X, const MatX& Zbar, int n,
                         Eigen::Ref<MatX> Wbar, Eigen::Ref<VecX> bbar, MatX* Xbar) {
  Wbar.noalias() += Zbar * X.transpose();
  bbar += Zbar.leftCols(n).rowwise().sum();
  if (Xbar != nullptr) Xbar->noalias() = W.transpose() * Zbar;
}

void gelu_jet(const MatX& Z, int n, int order, MatX& G) {
  const Eigen::Index rows = Z.rows();
  G.resize(rows, Z.cols());
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double z0 = Z(r, c);
      if (order == 0) {
        G(r, c) = gelu(z0);
        continue;
      }
      const GeluDerivs d = gelu_derivs(z0);
      G(r, c) = d.g;
      for (int j = 1; j <= 3; ++j) {
        const double zj = Z(r, j * n + c);
        G(r, j * n + c) = d.d1 * zj;
        if (order == 2) {
          G(r, (3 + j) * n + c) = d.d2 * zj * zj + d.d1 * Z(r, (3 + j) * n + c);
        }
      }
    }
  }
}

void gelu_jet_backward(const MatX& Z, const MatX& Gbar, int n, int order, MatX& Zbar) {
  const Eigen::Index rows = Z.rows();
  Zbar.resize(rows, Z.cols());
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const GeluDerivs d = gelu_derivs(Z(r, c));
      double z0bar = Gbar(r, c) * d.d1;
      for (int j = 1; order > 0 && j <= 3; ++j) {
        const double zj = Z(r, j * n + c);
        const double gj = Gbar(r, j * n + c);
        z0bar += gj * d.d2 * zj;
        double zjbar = gj * d.d1;
        if (order == 2) {
          const double gs = Gbar(r, (3 + j) * n + c);
          const double zs = Z(r, (3 + j) * n + c);
          z0bar += gs * (d.d3 * zj * zj + d.d2 * zs);
          zjbar += 2.0 * gs * d.d2 * zj;
          Zbar(r, (3 + j) * n + c) = gs * d.d1;
        }
        Zbar(r, j * n + c) = zjbar;
      }
      Zbar(r, c) = z0bar;
    }
  }
}

void mul_jet(const MatX& A, const MatX& B, int n, int order, MatX& P) {
  P.resize(A.rows(), A.cols());
  const auto a0 = A.leftCols(n).array();
  const auto b0 = B.leftCols(n).array();
  P.leftCols(n).array() = a0 * b0;
  if (order == 0) return;
  for (int j = 1; j <= 3; ++j) {
    const auto aj = A.middleCols(j * n, n).array();
    const auto bj = B.middleCols(j * n, n).array();
    P.middleCols(j * n, n).array() = aj * b0 + a0 * bj;
    if (order == 2) {
      P.middleCols((3 + j) * n, n).array() = A.middleCols((3 + j) * n, n).array() * b0 +
                                             2.0 * aj * bj +
                                             a0 * B.middleCols((3 + j) * n, n).array();
    }
  }
}

void mul_jet_backward(const MatX& A, const MatX& B, const MatX& Pbar, int n, int order,
                      MatX& Abar, MatX& Bbar) {
  const auto a0 = A.leftCols(n).array();
  const auto b0 = B.leftCols(n).array();
  const auto p0 = Pbar.leftCols(n).array();
  Abar.leftCols(n).array() += p0 * b0;
  Bbar.leftCols(n).array() += p0 * a0;
  if (order == 0) return;
  for (int j = 1; j <= 3; ++j) {
    const auto aj = A.middleCols(j * n, n).array();
    const auto bj = B.middleCols(j * n, n).array();
    const auto pj = Pbar.middleCols(j * n, n).array();
    Abar.leftCols(n).array() += pj * bj;
    Bbar.leftCols(n).array() += pj * aj;
    Abar.middleCols(j * n, n).array() += pj * b0;
    Bbar.middleCols(j * n, n).array() += pj * a0;
    if (order == 2) {
      const auto ps = Pbar.middleCols((3 + j) * n, n).array();
      Abar.leftCols(n).array() += ps * B.middleCols((3 + j) * n, n).array();
      Bbar.leftCols(n).array() += ps * A.middleCols((3 + j) * n, n).array();
      Abar.middleCols(j * n, n).array() += 2.0 * ps * bj;
      Bbar.middleCols(j * n, n).array() += 2.0 * ps * aj;
      Abar.middleCols((3 + j) * n, n).array() += ps * b0;
      Bbar.middleCols((3 + j) * n, n).array() += ps * a0;
    }
  }
}

}  // namespace pinngm::network
