/**
 * @file commands.hpp
 * @brief The command implementations behind the pinngm executable. Every
 * command writes its outputs below `out`.
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/common/error.hpp"
#include "pinngm/eval/metrics.hpp"
#include "pinngm/eval/propagate.hpp"
#include "pinngm/geometry/shape.hpp"
#include "pinngm/training/dataset.hpp"
#include "pinngm_cli/config.hpp"

namespace pinngm::cli {

struct Truth {
  std::shared_ptr<const analytic::GravityModel> model;
  std::shared_ptr<const geometry::ShapeModel> shape;  // null for point_mass_j2
  double R = 1.0;
  double mu = 0.0;
};

Truth build_truth(const ExperimentConfig& config);

/// Reads dataset.path, or samples and labels points from the truth.
training::Dataset build_dataset(const ExperimentConfig& config, const Truth& truth);

struct FitSummary {
  std::string bundle_dir;
  std::size_t params = 0;
  double fit_time = 0.0;
};

/// Trains (pinn*, tnn) or regresses (sh, mascon, elm) the configured model on
/// `data` and saves the bundle into `dir`.
FitSummary fit_model(const ExperimentConfig& config, const Truth& truth,
                     const training::Dataset& data, const std::string& dir);

/// Scores models against one truth. Evaluation points, truth accelerations
/// and the truth trajectory are computed once and reused.
class Evaluator {
 public:
  Evaluator(const ExperimentConfig& config, Truth truth);

  eval::MetricsReport evaluate(const analytic::GravityModel& model, const std::string& name);
  /// Loads the bundle and fills the regression time from its fit.json.
  eval::MetricsReport evaluate_bundle(const std::string& dir);

  const eval::Trajectory& truth_trajectory();
  eval::Trajectory model_trajectory(const analytic::GravityModel& model) const;

 private:
  ExperimentConfig config_;
  Truth truth_;
  std::unique_ptr<eval::MetricSuite> suite_;
  std::optional<eval::Trajectory> truth_traj_;
};

void cmd_gen_data(const ExperimentConfig& config, const std::string& out);
void cmd_train(const ExperimentConfig& config, const std::string& out);
void cmd_regress(const ExperimentConfig& config, const std::string& out);
void cmd_evaluate(const ExperimentConfig& config, const std::string& out);
void cmd_compare(const ExperimentConfig& config, const std::string& out);
void cmd_trajectory(const ExperimentConfig& config, const std::string& out);
void cmd_ablate(const ExperimentConfig& config, const std::string& out);
void cmd_mods_study(const ExperimentConfig& config, const std::string& out);

/// Stage names of the modification ladder in order.
const std::vector<std::string>& ladder_stages();
/// The config for stage `index` (0-based) of the ladder.
ExperimentConfig ladder_stage(const ExperimentConfig& base, std::size_t index);

/// Process exit code for an error category (0 is success).
int exit_code(ErrorCategory category);

}  // namespace pinngm::cli
