/**
 * @file heterogeneous.hpp
 * @brief Constant-density polyhedron perturbed by point-mass anomalies; the
 * ground-truth field for the asteroid experiments.
 */
#pragma once

#include <memory>

#include "pinngm/analytic/polyhedral.hpp"

namespace pinngm::analytic {

struct MassAnomaly {
  Vec3 position = Vec3::Zero();
  double mu = 0.0;
};

class HeterogeneousTruthModel final : public GravityModel {
 public:
  HeterogeneousTruthModel(PolyhedralModel base, std::vector<MassAnomaly> anomalies);

  GravityEval evaluate(const Vec3& x) const override;
  std::size_t parameter_count() const override;
  std::string kind() const override { return "heterogeneous"; }

  const PolyhedralModel& base() const noexcept { return base_; }
  const std::vector<MassAnomaly>& anomalies() const noexcept { return anomalies_; }
  double total_mu() const;

 private:
  PolyhedralModel base_;
  std::vector<MassAnomaly> anomalies_;
};

/// +fraction*mu at (+offset*R, 0, 0) and -fraction*mu at (-offset*R, 0, 0) on
/// top of a constant-density base carrying the full mu, so the total is mu.
HeterogeneousTruthModel make_two_anomaly_truth(std::shared_ptr<const geometry::ShapeModel> shape,
                                               double mu, double fraction = 0.1,
                                               double offset = 0.5);

}  // namespace pinngm::analytic
