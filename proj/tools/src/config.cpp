#include "pinngm_cli/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pinngm/common/error.hpp"
#include "pinngm/eval/orbit.hpp"

namespace pinngm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json truth_json(const TruthSpec& t) {
  json anomalies = json::array();
  for (const auto& a : t.anomalies) {
    anomalies.push_back({{"position", {a.position.x(), a.position.y(), a.position.z()}}, {"mu", a.mu}});
  }
  return {{"kind", t.kind},
          {"shape", t.shape},
          {"mu", t.mu},
          {"anomalies", anomalies},
          {"anomaly_fraction", t.anomaly_fraction},
          {"anomaly_offset", t.anomaly_offset},
          {"R", t.R},
          {"c20", t.c20}};
}

TruthSpec truth_from(const json& j) {
  TruthSpec t;
  read(j, "kind", t.kind);
  read(j, "shape", t.shape);
  read(j, "mu", t.mu);
  read(j, "anomaly_fraction", t.anomaly_fraction);
  read(j, "anomaly_offset", t.anomaly_offset);
  read(j, "R", t.R);
  read(j, "c20", t.c20);
  if (j.contains("anomalies")) {
    for (const auto& a : j.at("anomalies")) {
      const auto p = a.at("position").get<std::vector<double>>();
      if (p.size() != 3) throw ConfigError("anomaly position needs 3 coordinates");
      t.anomalies.push_back({Vec3(p[0], p[1], p[2]), a.at("mu").get<double>()});
    }
  }
  return t;
}

json dataset_json(const DatasetSpec& d) {
  return {{"path", d.path},   {"n", d.n},         {"r_min", d.r_min}, {"r_max", d.r_max},
          {"noise", d.noise}, {"seed", d.seed},   {"source", d.source}};
}

DatasetSpec dataset_from(const json& j) {
  DatasetSpec d;
  read(j, "path", d.path);
  read(j, "n", d.n);
  read(j, "r_min", d.r_min);
  read(j, "r_max", d.r_max);
  read(j, "noise", d.noise);
  read(j, "seed", d.seed);
  read(j, "source", d.source);
  return d;
}

json model_json(const ModelSpec& m) {
  return {{"kind", m.kind},
          {"size", m.size},
          {"depth", m.depth},
          {"width", m.width},
          {"features", m.features},
          {"proxy", m.proxy},
          {"boundary", m.boundary},
          {"trainable_boundary", m.trainable_boundary},
          {"fusion", m.fusion},
          {"r_ref", m.r_ref},
          {"k", m.k},
          {"k_star", m.k_star},
          {"R_star", m.R_star},
          {"param_budget", m.param_budget},
          {"l_max", m.l_max},
          {"alpha", m.alpha},
          {"mascons", m.mascons},
          {"hidden", m.hidden},
          {"seed", m.seed}};
}

ModelSpec model_from(const json& j) {
  ModelSpec m;
  read(j, "kind", m.kind);
  read(j, "size", m.size);
  read(j, "depth", m.depth);
  read(j, "width", m.width);
  read(j, "features", m.features);
  read(j, "proxy", m.proxy);
  read(j, "boundary", m.boundary);
  read(j, "trainable_boundary", m.trainable_boundary);
  read(j, "fusion", m.fusion);
  read(j, "r_ref", m.r_ref);
  read(j, "k", m.k);
  read(j, "k_star", m.k_star);
  read(j, "R_star", m.R_star);
  read(j, "param_budget", m.param_budget);
  read(j, "l_max", m.l_max);
  read(j, "alpha", m.alpha);
  read(j, "mascons", m.mascons);
  read(j, "hidden", m.hidden);
  read(j, "seed", m.seed);
  return m;
}

json training_json(const training::Hyperparams& h) {
  return {{"learning_rate", h.learning_rate},
          {"batch_size", h.batch_size},
          {"num_epochs", h.num_epochs},
          {"lr_patience", h.lr_patience},
          {"decay_rate", h.decay_rate},
          {"min_delta", h.min_delta},
          {"min_lr", h.min_lr},
          {"early_stop_patience", h.early_stop_patience},
          {"loss", network::to_string(h.loss)},
          {"seed", h.seed},
          {"val_fraction", h.val_fraction}};
}

training::Hyperparams training_from(const json& j) {
  training::Hyperparams h;
  read(j, "learning_rate", h.learning_rate);
  read(j, "batch_size", h.batch_size);
  read(j, "num_epochs", h.num_epochs);
  read(j, "lr_patience", h.lr_patience);
  read(j, "decay_rate", h.decay_rate);
  read(j, "min_delta", h.min_delta);
  read(j, "min_lr", h.min_lr);
  read(j, "early_stop_patience", h.early_stop_patience);
  if (j.contains("loss")) h.loss = network::loss_kind_from_string(j.at("loss").get<std::string>());
  read(j, "seed", h.seed);
  read(j, "val_fraction", h.val_fraction);
  return h;
}

json trajectory_json(const TrajectorySpec& t) {
  return {{"a", t.a},
          {"e", t.e},
          {"inc_deg", t.inc_deg},
          {"argp_deg", t.argp_deg},
          {"raan_deg", t.raan_deg},
          {"mean_anomaly_deg", t.mean_anomaly_deg},
          {"omega0_deg", t.omega0_deg},
          {"duration", t.duration},
          {"step", t.step}};
}

TrajectorySpec trajectory_from(const json& j) {
  TrajectorySpec t;
  read(j, "a", t.a);
  read(j, "e", t.e);
  read(j, "inc_deg", t.inc_deg);
  read(j, "argp_deg", t.argp_deg);
  read(j, "raan_deg", t.raan_deg);
  read(j, "mean_anomaly_deg", t.mean_anomaly_deg);
  read(j, "omega0_deg", t.omega0_deg);
  read(j, "duration", t.duration);
  read(j, "step", t.step);
  return t;
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::vector<std::string> truths = {"heterogeneous", "polyhedral", "point_mass_j2"};
  if (std::find(truths.begin(), truths.end(), truth.kind) == truths.end()) {
    throw ConfigError("unknown truth kind '" + truth.kind + "'");
  }
  if (truth.kind != "point_mass_j2" && truth.shape.empty()) {
    throw ConfigError("truth '" + truth.kind + "' needs a shape file");
  }
  if (!(truth.mu > 0.0)) throw ConfigError("truth mu must be positive");
  if (truth.kind == "point_mass_j2" && !(truth.R > 0.0)) throw ConfigError("truth R must be positive");
  if (dataset.path.empty()) {
    if (dataset.n == 0) throw ConfigError("dataset n must be positive");
    if (dataset.source == "shell" && !(dataset.r_min >= 0.0 && dataset.r_min < dataset.r_max)) {
      throw ConfigError("dataset band needs 0 <= r_min < r_max");
    }
    if (dataset.source != "shell" && dataset.source != "surface") {
      throw ConfigError("dataset source must be 'shell' or 'surface'");
    }
  }
  if (!(dataset.noise >= 0.0)) throw ConfigError("dataset noise must be >= 0");
  static const std::vector<std::string> kinds = {"pinn", "pinn3", "pinn2", "tnn",
                                                 "sh",   "mascon", "elm"};
  if (std::find(kinds.begin(), kinds.end(), model.kind) == kinds.end()) {
    throw ConfigError("unknown model kind '" + model.kind + "'");
  }
  if (model.size != "small" && model.size != "medium" && model.size != "large") {
    throw ConfigError("model size must be small, medium or large");
  }
  if (model.depth < 0 || model.width < 0) throw ConfigError("network depth/width must be >= 0");
  if (model.alpha < 0.0) throw ConfigError("alpha must be >= 0");
  training.validate();
  static const std::vector<std::string> names = {"planes", "generalization", "surface",
                                                 "trajectory"};
  for (const auto& m : metrics) {
    if (std::find(names.begin(), names.end(), m) == names.end()) {
      throw ConfigError("unknown metric '" + m + "'");
    }
  }
  if (!(trajectory.a > 0.0) || !(trajectory.e >= 0.0 && trajectory.e < 1.0) ||
      !(trajectory.duration > 0.0) || !(trajectory.step > 0.0)) {
    throw ConfigError("trajectory needs a > 0, 0 <= e < 1, duration > 0, step > 0");
  }
}

std::string ExperimentConfig::resolve(const std::string& path) const {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? p.string() : (fs::path(base_dir) / p).lexically_normal().string();
}

void ExperimentConfig::override_seed(std::uint64_t s) {
  seed = s;
  dataset.seed = s;
  model.seed = s;
  training.seed = s;
}

bool ExperimentConfig::wants(const std::string& metric) const {
  return std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
}

std::string to_json_text(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["truth"] = truth_json(c.truth);
  j["dataset"] = dataset_json(c.dataset);
  j["model"] = model_json(c.model);
  j["training"] = training_json(c.training);
  j["metrics"] = c.metrics;
  j["trajectory"] = trajectory_json(c.trajectory);
  j["bundles"] = c.bundles;
  j["ablate"] = {{"depths", c.ablate.depths},
                 {"widths", c.ablate.widths},
                 {"batch_sizes", c.ablate.batch_sizes},
                 {"learning_rates", c.ablate.learning_rates}};
  return j.dump(2);
}

ExperimentConfig config_from_json_text(const std::string& text, const std::string& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    const json j = json::parse(text);
    read(j, "name", c.name);
    read(j, "seed", c.seed);
    if (j.contains("truth")) c.truth = truth_from(j.at("truth"));
    if (j.contains("dataset")) c.dataset = dataset_from(j.at("dataset"));
    if (j.contains("model")) c.model = model_from(j.at("model"));
    if (j.contains("training")) c.training = training_from(j.at("training"));
    read(j, "metrics", c.metrics);
    if (j.contains("trajectory")) c.trajectory = trajectory_from(j.at("trajectory"));
    read(j, "bundles", c.bundles);
    if (j.contains("ablate")) {
      const json& a = j.at("ablate");
      read(a, "depths", c.ablate.depths);
      read(a, "widths", c.ablate.widths);
      read(a, "batch_sizes", c.ablate.batch_sizes);
      read(a, "learning_rates", c.ablate.learning_rates);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  return config_from_json_text(ss.str(), parent.empty() ? "." : parent.string());
}

void save_config(const std::string& path, const ExperimentConfig& config) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write config '" + path + "'");
  os << to_json_text(config) << '\n';
}

eval::TrajectoryConfig make_trajectory_config(const TrajectorySpec& s, double R) {
  eval::TrajectoryConfig t;
  t.elements = {s.a * R,
                s.e,
                eval::deg2rad(s.inc_deg),
                eval::deg2rad(s.argp_deg),
                eval::deg2rad(s.raan_deg),
                eval::deg2rad(s.mean_anomaly_deg)};
  t.omega0_deg = s.omega0_deg;
  t.duration = s.duration;
  t.sample_step = s.step;
  return t;
}

}  // namespace pinngm::cli
