#include "pinngm/regress/sh_regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm/regress/rls.hpp"

namespace pinngm::regress {

VecX kaula_diagonal(int l_max, double alpha, int first, int count) {
  if (!(alpha >= 0.0)) throw InvalidArgument("Kaula alpha must be >= 0");
  const int n = analytic::sh_coefficient_count(l_max);
  if (count < 0) count = n - first;
  VecX d(count);
  for (int k = 0; k < count; ++k) {
    const int idx = first + k;
    const int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(idx))));
    d[k] = l == 0 ? alpha : alpha / (static_cast<double>(l) * l);
  }
  return d;
}

MatX sh_design(const PointList& positions, int l_max, double R, int first, int count) {
  MatX H(3 * static_cast<Eigen::Index>(positions.size()), count);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const analytic::ShBasis b = analytic::sh_basis(l_max, 1.0, 1.0, positions[i] / R);
    H.middleRows(3 * static_cast<Eigen::Index>(i), 3) = b.acceleration.middleCols(first, count);
  }
  return H;
}

analytic::SphericalHarmonicModel regress_sh(const training::Dataset& data, int l_max, double alpha,
                                            double mu, double R, ShRegressionReport* report,
                                            int batch_points, int group_size) {
  if (l_max < 0) throw InvalidArgument("degree must be >= 0");
  if (!(mu > 0.0) || !(R > 0.0)) throw InvalidArgument("regress_sh needs mu > 0 and R > 0");
  if (batch_points < 1 || group_size < 1) throw InvalidArgument("batch sizes must be positive");
  PointList pos;
  std::vector<Vec3> acc;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.positions[i].norm() >= R) {
      pos.push_back(data.positions[i]);
      acc.push_back(data.accelerations[i]);
    }
  }
  const std::size_t dropped = data.size() - pos.size();
  if (pos.empty()) throw InvalidArgument("all samples lie beneath the Brillouin sphere");
  if (dropped > 0) log::info("regress_sh: dropped ", dropped, " samples with r < R");

  const double a_scale = R * R / mu;
  VecX y(3 * static_cast<Eigen::Index>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    y.segment<3>(3 * static_cast<Eigen::Index>(i)) = acc[i] * a_scale;
  }

  const int n = analytic::sh_coefficient_count(l_max);
  VecX coef = VecX::Zero(n);
  int groups = 0;
  for (int first = 0; first < n; first += group_size) {
    const int count = std::min(group_size, n - first);
    const MatX H = sh_design(pos, l_max, R, first, count);
    const MatX Gamma = kaula_diagonal(l_max, alpha, first, count).asDiagonal();
    const RlsState s = rls_stream(H, y, Gamma, 3 * static_cast<Eigen::Index>(batch_points));
    coef.segment(first, count) = s.c.col(0);
    y -= H * s.c.col(0);
    ++groups;
  }

  analytic::SphericalHarmonicModel model(mu, R, l_max);
  model.set_coefficients(coef);
  if (report != nullptr) *report = {pos.size(), dropped, groups};
  return model;
}

std::vector<double> default_alpha_grid() { return {1e-10, 1e-8, 1e-6, 1e-4, 1e-2}; }

double select_alpha_cv(const training::Dataset& data, int l_max, double mu, double R,
                       const std::vector<double>& grid, int folds, std::uint64_t seed) {
  if (grid.empty()) throw InvalidArgument("alpha grid is empty");
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.positions[i].norm() >= R) idx.push_back(i);
  }
  if (idx.size() < static_cast<std::size_t>(folds)) {
    throw InvalidArgument("too few exterior samples for cross-validation");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  double best_alpha = grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double alpha : grid) {
    double err = 0.0;
    std::size_t count = 0;
    try {
      for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t k = 0; k < idx.size(); ++k) {
          (static_cast<int>(k % static_cast<std::size_t>(folds)) == f ? test : train)
              .push_back(idx[k]);
        }
        const auto model = regress_sh(data.subset(train), l_max, alpha, mu, R);
        for (std::size_t i : test) {
          const Vec3& a = data.accelerations[i];
          err += (model.acceleration(data.positions[i]) - a).norm() / a.norm();
          ++count;
        }
      }
    } catch (const NumericalError& e) {
      log::warn("select_alpha_cv: alpha ", alpha, " skipped: ", e.what());
      continue;
    }
    err /= static_cast<double>(count);
    log::info("select_alpha_cv: alpha ", alpha, " held-out error ", 100.0 * err, "%");
    if (err < best_err) {
      best_err = err;
      best_alpha = alpha;
    }
  }
  if (!std::isfinite(best_err)) {
    throw NumericalError("select_alpha_cv: the regression failed for every alpha in the grid");
  }
  return best_alpha;
}

int sh_degree_for_budget(std::size_t budget) {
  if (budget < 1) throw InvalidArgument("parameter budget must be positive");
  int l = 0;
  while (static_cast<std::size_t>((l + 1) * (l + 1)) < budget) ++l;
  return l;
}

}  // namespace pinngm::regress
