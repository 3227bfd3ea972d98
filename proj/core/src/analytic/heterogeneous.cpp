#include "pinngm/analytic/heterogeneous.hpp"

#include "pinngm/analytic/point_mass.hpp"

namespace pinngm::analytic {

HeterogeneousTruthModel::HeterogeneousTruthModel(PolyhedralModel base,
                                                 std::vector<MassAnomaly> anomalies)
    : base_(std::move(base)), anomalies_(std::move(anomalies)) {}

GravityEval HeterogeneousTruthModel::evaluate(const Vec3& x) const {
  GravityEval out = base_.evaluate(x);
  for (const auto& anomaly : anomalies_) {
    const GravityEval g = pm_eval(anomaly.mu, x - anomaly.position);
    out.U += g.U;
    out.a += g.a;
  }
  return out;
}

std::size_t HeterogeneousTruthModel::parameter_count() const {
  return base_.parameter_count() + 4 * anomalies_.size();
}

double HeterogeneousTruthModel::total_mu() const {
  double total = base_.mu();
  for (const auto& anomaly : anomalies_) total += anomaly.mu;
  return total;
}

HeterogeneousTruthModel make_two_anomaly_truth(std::shared_ptr<const geometry::ShapeModel> shape,
                                               double mu, double fraction, double offset) {
  const double R = shape->radius();
  PolyhedralModel base(std::move(shape), mu);
  std::vector<MassAnomaly> anomalies = {
      {Vec3(offset * R, 0.0, 0.0), fraction * mu},
      {Vec3(-offset * R, 0.0, 0.0), -fraction * mu},
  };
  return HeterogeneousTruthModel(std::move(base), std::move(anomalies));
}

}  // namespace pinngm::analytic
