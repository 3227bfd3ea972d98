#include "pinngm/regress/mascon_regression.hpp"

#include <Eigen/QR>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"

namespace pinngm::regress {

PointList sample_interior(const geometry::ShapeModel& shape, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vec3 lo = shape.bbox_min();
  const Vec3 hi = shape.bbox_max();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y()), uz(lo.z(), hi.z());
  PointList out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * (n + 10)) throw NumericalError("interior rejection sampling stalled");
    const Vec3 p(ux(rng), uy(rng), uz(rng));
    try {
      if (geometry::contains(shape, p)) out.push_back(p);
    } catch (const SingularityError&) {
    }
  }
  return out;
}

MasconRegressionResult regress_mascons(const training::Dataset& data,
                                       const geometry::ShapeModel& shape, std::size_t n_total,
                                       double mu, std::uint64_t seed,
                                       const PointList* fixed_positions, std::size_t batch) {
  if (n_total < 1) throw InvalidArgument("need at least one mascon");
  if (batch < 1) throw InvalidArgument("mascon batch size must be positive");
  if (!(mu > 0.0)) throw InvalidArgument("regress_mascons needs mu > 0");
  if (data.size() == 0) throw InvalidArgument("mascon regression needs data");
  if (fixed_positions != nullptr && fixed_positions->size() != n_total) {
    throw InvalidArgument("fixed mascon positions do not match n_total");
  }

  const double R = shape.radius();
  const double a_scale = R * R / mu;
  const PointList positions =
      fixed_positions != nullptr ? *fixed_positions : sample_interior(shape, n_total, seed);

  const auto N = static_cast<Eigen::Index>(data.size());
  VecX residual(3 * N);
  for (Eigen::Index i = 0; i < N; ++i) {
    residual.segment<3>(3 * i) = data.accelerations[static_cast<std::size_t>(i)] * a_scale;
  }

  MasconRegressionResult result;
  result.placement_seed = seed;
  result.residual_norms.push_back(residual.norm());

  for (std::size_t start = 0; start < n_total; start += batch) {
    const std::size_t nb = std::min(batch, n_total - start);
    MatX A(3 * N, static_cast<Eigen::Index>(nb));
    for (std::size_t k = 0; k < nb; ++k) {
      const Vec3 p = positions[start + k] / R;
      for (Eigen::Index i = 0; i < N; ++i) {
        const Vec3 d = data.positions[static_cast<std::size_t>(i)] / R - p;
        const double r = d.norm();
        if (!(r > 0.0)) {
          throw SingularityError("data sample " + std::to_string(i) + " coincides with mascon " +
                                 std::to_string(start + k));
        }
        A.block<3, 1>(3 * i, static_cast<Eigen::Index>(k)) = -d / (r * r * r);
      }
    }
    Eigen::ColPivHouseholderQR<MatX> qr(A);
    VecX m;
    if (qr.rank() == static_cast<Eigen::Index>(nb)) {
      m = qr.solve(residual);
    } else {
      ++result.ridge_fallbacks;
      const double lambda = 1e-10 * A.squaredNorm() / static_cast<double>(nb);
      log::warn("regress_mascons: batch at ", start, " is rank deficient (rank ", qr.rank(), " of ",
                nb, "); using ridge lambda ", lambda);
      MatX K = A.transpose() * A;
      K.diagonal().array() += lambda;
      m = K.ldlt().solve(A.transpose() * residual);
    }
    residual -= A * m;
    result.residual_norms.push_back(residual.norm());
    for (std::size_t k = 0; k < nb; ++k) {
      result.model.append(positions[start + k], m[static_cast<Eigen::Index>(k)] * mu);
    }
  }
  log::info("regress_mascons: ", n_total, " mascons, total mu ", result.model.total_mu(),
            " (target ", mu, ")");
  return result;
}

}  // namespace pinngm::regress
