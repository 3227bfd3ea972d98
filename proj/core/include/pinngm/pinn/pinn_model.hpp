/**
 * @file pinn_model.hpp
 * @brief The deployable physics-informed gravity model: non-dimensionalization,
 * feature map, proxy unscaling, boundary blending and low-fidelity fusion
 * around a gated MLP.
 *
 * Non-dimensional potential:
 *   U_hat = c1(x) * y(features(x)) + c0(x)
 * with, for boundary blending enabled (w_BC = H(r; k, r_ref), w_NN = 1 - w_BC):
 *   fusion on  : c1 = w_NN / n(r),  c0 = U_LF_hat            (U_LF_hat = w_LF U_LF)
 *   fusion off : c1 = w_NN / n(r),  c0 = w_BC U_BC           (U_BC = mu/r + J2 term)
 * and with blending disabled c1 = 1 / n(r), c0 = U_LF_hat (or 0).
 */
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/network/mlp.hpp"
#include "pinngm/network/pipeline_loss.hpp"
#include "pinngm/pinn/features.hpp"

namespace pinngm::pinn {

struct NonDimConstants {
  double x_star = 1.0;
  double U_star = 1.0;
  double t_star = 1.0;
  double a_star = 1.0;

  /// Derives t_star = sqrt(x_star^2 / U_star) and a_star = x_star / t_star^2.
  static NonDimConstants from(double x_star, double U_star);
};

/// Point mass plus optional unnormalized zonal C20 term, in SI units.
struct LowFidelityModel {
  double mu = 0.0;
  double R = 1.0;
  double c20 = 0.0;

  double potential(const Vec3& x) const;
};

struct BoundaryConfig {
  bool enabled = true;
  double r_ref = 10.0;
  double k = 2.0;
  /// Whether k and r_ref are optimized together with the network weights.
  bool trainable = true;
};

struct FusionConfig {
  bool enabled = true;
  double R_star = 1.0;
  double k_star = 0.5;
  LowFidelityModel lf;
};

struct PipelineOptions {
  FeatureKind features = FeatureKind::kRadial5;
  /// Divide the network output by n(r) (proxy potential).
  bool proxy = true;
};

class PinnModel final : public analytic::GravityModel {
 public:
  PinnModel(network::MlpParams params, NonDimConstants constants, BoundaryConfig boundary,
            FusionConfig fusion, PipelineOptions options = {});

  analytic::GravityEval evaluate(const Vec3& x) const override;
  std::vector<Vec3> accelerations(const PointList& points) const override;
  std::size_t parameter_count() const override { return params_.size(); }
  std::string kind() const override { return "pinn"; }

  /// Dimensional potential and Laplacian of the potential.
  double potential(const Vec3& x) const;
  double laplacian(const Vec3& x) const;

  const network::MlpParams& params() const noexcept { return params_; }
  network::MlpParams& mutable_params() noexcept { return params_; }
  void set_params(network::MlpParams params);
  const NonDimConstants& constants() const noexcept { return constants_; }
  /// Current boundary settings; k and r_ref are read from the parameter vector.
  BoundaryConfig boundary() const;
  const FusionConfig& fusion() const noexcept { return fusion_; }
  const PipelineOptions& options() const noexcept { return options_; }

  /// Clamp the trainable transition scalars into their admissible range
  /// (k >= 1e-3, r_ref >= 1).
  void project_parameters();

  /// Builds the network-level batch for non-dimensional positions (3 x N).
  /// Coefficients are evaluated at the current k and r_ref; when
  /// `param_jacobians` is non-null it receives their derivatives with respect
  /// to (k, r_ref), used to chain gradients onto the transition scalars.
  struct CoefficientJacobians {
    network::AffineCoefficients dk;
    network::AffineCoefficients dr;
  };
  network::PipelineBatch make_batch(const network::Mat3X& x_nd, int order,
                                    CoefficientJacobians* param_jacobians = nullptr) const;

  /// Loss and gradient over the full flat parameter vector (network weights
  /// and, when trainable, the transition scalars). Positions and accelerations
  /// are non-dimensional.
  network::LossResult loss_and_gradient(const network::Mat3X& x_nd, const network::Mat3X& a_nd,
                                        network::LossKind kind, bool with_gradient = true) const;

  /// Loss and gradient given a batch prepared once; used when the transition
  /// scalars are frozen so the coefficients do not change between steps.
  network::LossResult loss_and_gradient(const network::PipelineBatch& batch,
                                        network::LossKind kind,
                                        bool with_gradient = true) const;

 private:
  network::MlpParams params_;
  NonDimConstants constants_;
  BoundaryConfig boundary_;
  FusionConfig fusion_;
  PipelineOptions options_;
};

/// U_star = max_i(U_i - U_LF(x_i)) over labelled samples (U_LF = 0 when
/// fusion is disabled); falls back to mu/R without potential labels. Throws
/// NumericalError when the maximum is not positive.
NonDimConstants compute_constants(const PointList& positions,
                                  const std::optional<std::vector<double>>& potentials, double R,
                                  const LowFidelityModel* lf, double mu);

double pinn_potential(const PinnModel& model, const Vec3& x);
Vec3 pinn_acceleration(const PinnModel& model, const Vec3& x);
double pinn_laplacian(const PinnModel& model, const Vec3& x);

}  // namespace pinngm::pinn
