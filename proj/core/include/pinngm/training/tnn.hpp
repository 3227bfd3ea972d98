/**
 * @file tnn.hpp
 * @brief Traditional neural-network baseline: a plain GELU MLP regressing
 * acceleration directly from position with a quadratic loss on min-max
 * normalized inputs and outputs.
 */
#pragma once

#include <string>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/network/mlp.hpp"
#include "pinngm/training/dataset.hpp"
#include "pinngm/training/trainer.hpp"

namespace pinngm::training {

struct MinMax {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();

  static MinMax fit(const std::vector<Vec3>& values);
  Vec3 forward(const Vec3& v) const;   // to [0, 1]
  Vec3 inverse(const Vec3& v) const;   // back to physical units
};

class TnnModel final : public analytic::GravityModel {
 public:
  TnnModel(network::MlpParams params, MinMax input, MinMax output);

  analytic::GravityEval evaluate(const Vec3& x) const override;
  std::vector<Vec3> accelerations(const PointList& points) const override;
  std::size_t parameter_count() const override { return params_.size(); }
  std::string kind() const override { return "tnn"; }

  const network::MlpParams& params() const noexcept { return params_; }
  network::MlpParams& mutable_params() noexcept { return params_; }
  const MinMax& input_scaling() const noexcept { return in_; }
  const MinMax& output_scaling() const noexcept { return out_; }

 private:
  network::MlpParams params_;
  MinMax in_;
  MinMax out_;
};

struct TnnArchitecture {
  int depth = 2;
  int width = 12;
};

struct TnnTrainResult {
  TnnModel model;
  TrainHistory history;
};

/// Mean over samples of the squared error summed over the three normalized
/// output components.
TnnTrainResult train_tnn(const Dataset& data, const Hyperparams& hp, const TnnArchitecture& arch);

void save_tnn_bundle(const std::string& dir, const TnnModel& model);
TnnModel load_tnn_bundle(const std::string& dir);

}  // namespace pinngm::training
