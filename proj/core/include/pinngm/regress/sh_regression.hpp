/**
 * @file sh_regression.hpp
 * @brief Kaula-regularized recursive least-squares fit of spherical-harmonic
 * coefficients to acceleration data.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "pinngm/analytic/spherical_harmonics.hpp"
#include "pinngm/training/dataset.hpp"

namespace pinngm::regress {

struct ShRegressionReport {
  std::size_t used = 0;
  std::size_t dropped_inside = 0;
  int groups = 0;
};

/// Diagonal of Gamma for the coefficients [first, first + count) in the
/// flattened order: alpha / l^2, with the l = 0 divisor taken as 1.
VecX kaula_diagonal(int l_max, double alpha, int first = 0, int count = -1);

/// Acceleration design matrix (3N x n) of the non-dimensional problem
/// (positions in units of R, accelerations in units of mu/R^2) for the
/// coefficient columns [first, first + count).
MatX sh_design(const PointList& positions, int l_max, double R, int first, int count);

/// Fits coefficients through degree l_max. Samples with r < R are dropped.
/// Accelerations are streamed in batches of `batch_points` samples; when more
/// than `group_size` coefficients are requested they are fitted in groups,
/// low degree first, each against the residual left by earlier groups.
analytic::SphericalHarmonicModel regress_sh(const training::Dataset& data, int l_max, double alpha,
                                            double mu, double R,
                                            ShRegressionReport* report = nullptr,
                                            int batch_points = 100, int group_size = 5000);

/// k-fold cross-validation over a log grid of alphas; returns the alpha with
/// the lowest held-out mean percent acceleration error. Alphas for which the
/// regression is numerically singular are skipped.
double select_alpha_cv(const training::Dataset& data, int l_max, double mu, double R,
                       const std::vector<double>& grid, int folds = 3, std::uint64_t seed = 0);

/// Default grid {1e-10, 1e-8, ..., 1e-2}.
std::vector<double> default_alpha_grid();

/// Smallest degree whose (l+1)^2 coefficient count reaches `budget`
/// (a budget of 240 gives degree 15).
int sh_degree_for_budget(std::size_t budget);

}  // namespace pinngm::regress
