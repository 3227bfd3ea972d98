/**
 * @file losses.hpp
 * @brief The three PINN losses evaluated on given predictions.
 *
 * These are the reference definitions; training evaluates the same formulas
 * inside network::loss_param_grad together with their gradients.
 */
#pragma once

#include "pinngm/network/pipeline_loss.hpp"

namespace pinngm::pinn {

using network::Mat3X;

/// mean_i |a_hat_i - a_i|
double loss_rms(const Mat3X& predicted, const Mat3X& target);
/// loss_rms + mean_i |a_hat_i - a_i| / |a_i|; throws NumericalError for a
/// zero-magnitude label.
double loss_rms_pct(const Mat3X& predicted, const Mat3X& target);
/// loss_rms_pct + mean_i |laplacian_i|
double loss_al(const Mat3X& predicted, const Mat3X& target, const VecX& laplacians);

}  // namespace pinngm::pinn
