/**
 * @file factory.hpp
 * @brief Builds a freshly initialized PINN gravity model sized for a dataset.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pinngm/pinn/pinn_model.hpp"

namespace pinngm::pinn {

struct PinnSpec {
  int depth = 6;
  int width = 32;
  PipelineOptions pipeline;
  /// r_ref in units of R.
  BoundaryConfig boundary;
  bool fusion = true;
  double k_star = 0.5;
  /// Fusion transition radius in units of R.
  double R_star = 1.0;
  /// Unnormalized C20 of the analytic part (0 for a point mass).
  double c20 = 0.0;
  std::uint64_t seed = 0;
};

/// Size presets: "small" is a (2, 8) network, "large" an (8, 64) one.
PinnSpec pinn_preset(const std::string& size);

/// Non-dimensionalizes with x* = R and U* from the potentials (or mu / R when
/// absent), then initializes the network from spec.seed. Cartesian features
/// use x* = the largest sample radius instead, so inputs lie in the unit ball;
/// they cannot be combined with the proxy, boundary or fusion stages.
PinnModel make_pinn(const PinnSpec& spec, const PointList& positions,
                    const std::optional<std::vector<double>>& potentials, double mu, double R);

}  // namespace pinngm::pinn
