/**
 * @file elm.hpp
 * @brief Extreme learning machine: frozen random sigmoid layer, ridge
 * regressed linear read-out, min-max scaling of inputs and outputs to [0, 1].
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/training/dataset.hpp"
#include "pinngm/training/tnn.hpp"

namespace pinngm::regress {

class ElmModel final : public analytic::GravityModel {
 public:
  ElmModel(MatX input_weights, VecX input_bias, MatX output_weights, training::MinMax input,
           training::MinMax output, std::uint64_t seed);

  analytic::GravityEval evaluate(const Vec3& x) const override;
  std::size_t parameter_count() const override;
  std::string kind() const override { return "elm"; }

  /// Hidden activations plus a trailing constant 1 for a scaled input.
  VecX hidden(const Vec3& scaled_input) const;

  const MatX& input_weights() const noexcept { return W_; }
  const VecX& input_bias() const noexcept { return b_; }
  const MatX& output_weights() const noexcept { return beta_; }
  const training::MinMax& input_scaling() const noexcept { return in_; }
  const training::MinMax& output_scaling() const noexcept { return out_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int n_hidden() const noexcept { return static_cast<int>(W_.rows()); }

 private:
  MatX W_;
  VecX b_;
  MatX beta_;  // (n_hidden + 1) x 3
  training::MinMax in_;
  training::MinMax out_;
  std::uint64_t seed_;
};

/// Input weights and biases uniform on [-1, 1] from `seed`; output weights by
/// ridge recursive least squares (Gamma = alpha I) in batches of
/// `batch_points` samples.
ElmModel regress_elm(const training::Dataset& data, int n_hidden, double alpha, std::uint64_t seed,
                     int batch_points = 100);

/// Hidden design matrix (N x (n_hidden + 1)) and scaled targets (N x 3).
void elm_design(const ElmModel& model, const training::Dataset& data, MatX& Phi, MatX& Y);

void save_elm_bundle(const std::string& dir, const ElmModel& model);
ElmModel load_elm_bundle(const std::string& dir);

}  // namespace pinngm::regress
