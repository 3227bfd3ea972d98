/**
 * @file mascon_regression.hpp
 * @brief Batched least-squares fit of interior point masses.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "pinngm/analytic/mascon.hpp"
#include "pinngm/geometry/shape.hpp"
#include "pinngm/training/dataset.hpp"

namespace pinngm::regress {

struct MasconRegressionResult {
  analytic::MasconModel model;
  std::uint64_t placement_seed = 0;
  /// Residual acceleration norm (non-dimensional) before the first batch and
  /// after each batch.
  std::vector<double> residual_norms;
  int ridge_fallbacks = 0;
};

/// Uniform random points inside the shape by rejection from its bounding box.
PointList sample_interior(const geometry::ShapeModel& shape, std::size_t n, std::uint64_t seed);

/// Places n_total mascons (or uses `fixed_positions` when given) and fits
/// their masses `batch` at a time against the remaining acceleration
/// residual. Masses are unconstrained in sign.
MasconRegressionResult regress_mascons(const training::Dataset& data,
                                       const geometry::ShapeModel& shape, std::size_t n_total,
                                       double mu, std::uint64_t seed,
                                       const PointList* fixed_positions = nullptr,
                                       std::size_t batch = 500);

}  // namespace pinngm::regress
