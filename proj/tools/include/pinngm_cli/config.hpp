/**
 * @file config.hpp
 * @brief Experiment description read by every command: truth field, dataset,
 * model, training, metrics and grids. Stored as JSON.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pinngm/analytic/heterogeneous.hpp"
#include "pinngm/eval/propagate.hpp"
#include "pinngm/training/trainer.hpp"

namespace pinngm::cli {

struct TruthSpec {
  /// heterogeneous | polyhedral | point_mass_j2
  std::string kind = "heterogeneous";
  /// OBJ file; relative paths resolve against the config file's directory.
  std::string shape;
  double mu = 4.463e5;
  /// Explicit anomalies; when empty the two-anomaly default below is used.
  std::vector<analytic::MassAnomaly> anomalies;
  double anomaly_fraction = 0.1;
  double anomaly_offset = 0.5;
  /// Reference radius and unnormalized C20 for point_mass_j2.
  double R = 16000.0;
  double c20 = 0.0;
};

struct DatasetSpec {
  /// Existing dataset CSV; when empty the data are generated from the truth.
  std::string path;
  std::size_t n = 500;
  double r_min = 0.0;
  double r_max = 10.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  /// shell | surface
  std::string source = "shell";
};

struct ModelSpec {
  /// pinn | pinn3 | pinn2 | tnn | sh | mascon | elm
  std::string kind = "pinn3";
  /// small | medium | large
  std::string size = "small";
  int depth = 0;  // 0: from size
  int width = 0;
  std::string features = "radial5";
  bool proxy = true;
  bool boundary = true;
  bool trainable_boundary = true;
  bool fusion = true;
  double r_ref = 10.0;
  double k = 2.0;
  double k_star = 0.5;
  double R_star = 1.0;
  /// Regression models: target parameter count (0: from size).
  std::size_t param_budget = 0;
  int l_max = 0;
  /// Ridge weight; 0 selects it by cross validation (sh) or uses 1e-8 (elm).
  double alpha = 0.0;
  int mascons = 0;
  int hidden = 0;
  std::uint64_t seed = 0;
};

struct TrajectorySpec {
  /// Semi-major axis in units of R.
  double a = 2.0;
  double e = 0.1;
  double inc_deg = 90.0;
  double argp_deg = 0.0;
  double raan_deg = 0.0;
  double mean_anomaly_deg = 0.0;
  double omega0_deg = 0.00073;
  double duration = 86400.0;
  double step = 86.4;
};

struct AblateSpec {
  std::vector<int> depths;
  std::vector<int> widths;
  std::vector<int> batch_sizes;
  std::vector<double> learning_rates;
};

struct ExperimentConfig {
  std::string name = "experiment";
  TruthSpec truth;
  DatasetSpec dataset;
  ModelSpec model;
  training::Hyperparams training;
  /// Any of planes, generalization, surface, trajectory.
  std::vector<std::string> metrics = {"planes", "generalization", "surface", "trajectory"};
  TrajectorySpec trajectory;
  /// Bundle directories for compare/evaluate/trajectory.
  std::vector<std::string> bundles;
  AblateSpec ablate;
  std::uint64_t seed = 0;
  /// Directory of the file the config was read from (not serialized).
  std::string base_dir = ".";

  /// Throws ConfigError on out-of-range or inconsistent fields.
  void validate() const;
  std::string resolve(const std::string& path) const;
  /// Replaces every seed in the config with `seed`.
  void override_seed(std::uint64_t seed);
  bool wants(const std::string& metric) const;
};

std::string to_json_text(const ExperimentConfig& config);
ExperimentConfig config_from_json_text(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& config);

eval::TrajectoryConfig make_trajectory_config(const TrajectorySpec& spec, double R);

}  // namespace pinngm::cli
