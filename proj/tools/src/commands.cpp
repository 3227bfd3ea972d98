#include "pinngm_cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "pinngm/analytic/spherical_harmonics.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm/eval/bundles.hpp"
#include "pinngm/eval/report.hpp"
#include "pinngm/geometry/sampling.hpp"
#include "pinngm/pinn/bundle.hpp"
#include "pinngm/pinn/factory.hpp"
#include "pinngm/regress/elm.hpp"
#include "pinngm/regress/mascon_regression.hpp"
#include "pinngm/regress/sh_regression.hpp"
#include "pinngm/training/tnn.hpp"

namespace pinngm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

std::size_t size_budget(const std::string& size) {
  if (size == "small") return 250;
  if (size == "large") return 30000;
  return 2500;
}

bool is_pinn(const std::string& kind) { return kind == "pinn" || kind == "pinn3" || kind == "pinn2"; }
bool is_network(const std::string& kind) { return is_pinn(kind) || kind == "tnn"; }

pinn::PinnSpec pinn_spec(const ModelSpec& m) {
  pinn::PinnSpec s = pinn::pinn_preset(m.size);
  if (m.depth > 0) s.depth = m.depth;
  if (m.width > 0) s.width = m.width;
  s.seed = m.seed;
  s.k_star = m.k_star;
  s.R_star = m.R_star;
  s.boundary.r_ref = m.r_ref;
  s.boundary.k = m.k;
  s.boundary.trainable = m.trainable_boundary;
  if (m.kind == "pinn3") {
    s.pipeline = {pinn::FeatureKind::kRadial5, true};
    s.boundary.enabled = true;
    s.fusion = true;
  } else if (m.kind == "pinn2") {
    s.pipeline = {pinn::FeatureKind::kCartesian3, false};
    s.boundary.enabled = false;
    s.fusion = false;
  } else {
    s.pipeline = {pinn::feature_kind_from_string(m.features), m.proxy};
    s.boundary.enabled = m.boundary;
    s.fusion = m.fusion;
  }
  return s;
}

training::TnnArchitecture tnn_arch(const ModelSpec& m) {
  training::TnnArchitecture a;
  if (m.size == "medium") a = {6, 32};
  if (m.size == "large") a = {8, 64};
  if (m.depth > 0) a.depth = m.depth;
  if (m.width > 0) a.width = m.width;
  return a;
}

}  // namespace

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return 2;
    case ErrorCategory::kIo:
      return 3;
    case ErrorCategory::kGeometry:
      return 4;
    case ErrorCategory::kSingularity:
      return 5;
    case ErrorCategory::kNumerical:
      return 6;
    case ErrorCategory::kInvalidArgument:
      return 7;
  }
  return 1;
}

Truth build_truth(const ExperimentConfig& config) {
  const TruthSpec& t = config.truth;
  Truth out;
  out.mu = t.mu;
  if (t.kind == "point_mass_j2") {
    out.model = std::make_shared<analytic::SphericalHarmonicModel>(
        analytic::make_point_mass_j2(t.mu, t.R, t.c20));
    out.R = t.R;
    return out;
  }
  const std::string path = config.resolve(t.shape);
  if (!fs::exists(path)) throw ConfigError("shape file '" + path + "' does not exist");
  auto shape = std::make_shared<const geometry::ShapeModel>(geometry::load_shape_file(path));
  out.shape = shape;
  out.R = shape->radius();
  if (t.kind == "polyhedral") {
    out.model = std::make_shared<analytic::PolyhedralModel>(shape, t.mu);
  } else if (t.anomalies.empty()) {
    out.model = std::make_shared<analytic::HeterogeneousTruthModel>(
        analytic::make_two_anomaly_truth(shape, t.mu, t.anomaly_fraction, t.anomaly_offset));
  } else {
    out.model = std::make_shared<analytic::HeterogeneousTruthModel>(
        analytic::PolyhedralModel(shape, t.mu), t.anomalies);
  }
  return out;
}

training::Dataset build_dataset(const ExperimentConfig& config, const Truth& truth) {
  const DatasetSpec& d = config.dataset;
  if (!d.path.empty()) return training::read_dataset(config.resolve(d.path));

  training::DatasetMeta meta;
  meta.seed = d.seed;
  meta.r_min = d.r_min;
  meta.r_max = d.r_max;
  meta.truth = config.truth.kind;
  meta.source = d.source;
  meta.R = truth.R;
  meta.mu = truth.mu;

  training::Dataset data;
  if (d.source == "surface") {
    if (!truth.shape) throw ConfigError("surface sampling needs a shape");
    data = training::label_points(*truth.model,
                                  geometry::sample_surface(*truth.shape, d.n, d.seed, 1e-6), meta);
  } else {
    const PointList pts = geometry::sample_shell(truth.R, d.r_min, d.r_max, d.n, d.seed);
    data = truth.shape ? training::label_points(*truth.model, pts, meta, *truth.shape)
                       : training::label_points(*truth.model, pts, meta);
  }
  if (d.noise > 0.0) data = training::add_noise(data, d.noise, d.seed + 1);
  return data;
}

FitSummary fit_model(const ExperimentConfig& config, const Truth& truth,
                     const training::Dataset& all, const std::string& dir) {
  const ModelSpec& m = config.model;
  const training::Dataset data = all.exterior_only();
  if (data.size() == 0) throw ConfigError("no exterior samples to fit");
  FitSummary s;
  s.bundle_dir = dir;
  const auto start = std::chrono::steady_clock::now();
  json extra;

  if (is_pinn(m.kind)) {
    const pinn::PinnModel init =
        pinn::make_pinn(pinn_spec(m), data.positions, data.potentials, truth.mu, truth.R);
    auto res = training::train(init, data, config.training);
    s.fit_time = seconds_since(start);
    pinn::save_pinn_bundle(dir, res.model);
    training::write_history((fs::path(dir) / "history.csv").string(), res.history);
    s.params = res.model.parameter_count();
    extra = {{"epochs", res.history.epochs()},
             {"best_epoch", res.history.best_epoch},
             {"stop_reason", res.history.stop_reason},
             {"diverged", res.history.diverged}};
  } else if (m.kind == "tnn") {
    auto res = training::train_tnn(data, config.training, tnn_arch(m));
    s.fit_time = seconds_since(start);
    training::save_tnn_bundle(dir, res.model);
    training::write_history((fs::path(dir) / "history.csv").string(), res.history);
    s.params = res.model.parameter_count();
    extra = {{"epochs", res.history.epochs()}, {"best_epoch", res.history.best_epoch}};
  } else if (m.kind == "sh") {
    const std::size_t budget = m.param_budget > 0 ? m.param_budget : size_budget(m.size);
    const int l_max = m.l_max > 0 ? m.l_max : regress::sh_degree_for_budget(budget);
    const double alpha =
        m.alpha > 0.0 ? m.alpha
                      : regress::select_alpha_cv(data, l_max, truth.mu, truth.R,
                                                 regress::default_alpha_grid(), 3, m.seed);
    regress::ShRegressionReport rep;
    auto model = regress::regress_sh(data, l_max, alpha, truth.mu, truth.R, &rep);
    s.fit_time = seconds_since(start);
    eval::save_sh_bundle(dir, model);
    s.params = model.parameter_count();
    extra = {{"l_max", l_max}, {"alpha", alpha}, {"dropped_inside", rep.dropped_inside}};
  } else if (m.kind == "mascon") {
    if (!truth.shape) throw ConfigError("mascon regression needs a shape model");
    const std::size_t budget = m.param_budget > 0 ? m.param_budget : size_budget(m.size);
    const auto n = m.mascons > 0 ? static_cast<std::size_t>(m.mascons) : budget / 4;
    auto res = regress::regress_mascons(data, *truth.shape, n, truth.mu, m.seed);
    s.fit_time = seconds_since(start);
    eval::save_mascon_bundle(dir, res.model, truth.mu, truth.R);
    s.params = res.model.parameter_count();
    extra = {{"mascons", n}, {"ridge_fallbacks", res.ridge_fallbacks}};
  } else if (m.kind == "elm") {
    const std::size_t budget = m.param_budget > 0 ? m.param_budget : size_budget(m.size);
    const int hidden = m.hidden > 0 ? m.hidden : std::max(1, static_cast<int>((budget - 3) / 7));
    const double alpha = m.alpha > 0.0 ? m.alpha : 1e-8;
    auto model = regress::regress_elm(data, hidden, alpha, m.seed);
    s.fit_time = seconds_since(start);
    regress::save_elm_bundle(dir, model);
    s.params = model.parameter_count();
    extra = {{"hidden", hidden}, {"alpha", alpha}};
  } else {
    throw ConfigError("unknown model kind '" + m.kind + "'");
  }

  json fit = {{"kind", m.kind}, {"params", s.params}, {"fit_time_s", s.fit_time}};
  fit.update(extra);
  write_json(fs::path(dir) / "fit.json", fit);
  log::info("fitted ", m.kind, " with ", s.params, " parameters in ", s.fit_time, " s");
  return s;
}

Evaluator::Evaluator(const ExperimentConfig& config, Truth truth)
    : config_(config), truth_(std::move(truth)) {
  if (config_.wants("planes") || config_.wants("generalization") || config_.wants("surface")) {
    suite_ = std::make_unique<eval::MetricSuite>(truth_.model, truth_.shape, truth_.R, config_.seed);
  }
}

const eval::Trajectory& Evaluator::truth_trajectory() {
  if (!truth_traj_) {
    eval::TrajectoryConfig tc = make_trajectory_config(config_.trajectory, truth_.R);
    tc.rtol = 1e-12;
    tc.atol = 1e-12;
    truth_traj_ = eval::propagate(*truth_.model, truth_.mu, tc);
    if (!truth_traj_->complete) {
      throw NumericalError("truth trajectory failed: " + truth_traj_->failure);
    }
  }
  return *truth_traj_;
}

eval::Trajectory Evaluator::model_trajectory(const analytic::GravityModel& model) const {
  return eval::propagate(model, truth_.mu, make_trajectory_config(config_.trajectory, truth_.R));
}

eval::MetricsReport Evaluator::evaluate(const analytic::GravityModel& model,
                                        const std::string& name) {
  eval::MetricsReport rep;
  if (suite_) rep = suite_->evaluate(model);
  rep.name = name;
  rep.kind = model.kind();
  rep.params = model.parameter_count();
  if (!config_.wants("planes")) rep.planes_pct.reset();
  if (!config_.wants("generalization")) {
    rep.interior_pct.reset();
    rep.exterior_pct.reset();
    rep.extrapolation_pct.reset();
  }
  if (!config_.wants("surface")) rep.surface_pct.reset();
  if (config_.wants("trajectory")) {
    const eval::Trajectory& truth = truth_trajectory();
    const eval::Trajectory traj = model_trajectory(model);
    rep.propagation_time_s = traj.wall_time;
    if (traj.complete) {
      const auto err = eval::accumulated_error(traj, truth);
      rep.accumulated_error_km = err.S_km;
      rep.final_position_error_km = err.final_km;
    } else {
      log::warn(name, ": trajectory incomplete (", traj.failure, "); position error reported as NA");
    }
  }
  return rep;
}

eval::MetricsReport Evaluator::evaluate_bundle(const std::string& dir) {
  const auto model = eval::load_any_bundle(dir);
  std::string name = fs::path(dir).lexically_normal().filename().string();
  std::optional<double> fit_time;
  const fs::path fit = fs::path(dir) / "fit.json";
  if (fs::exists(fit)) {
    std::ifstream is(fit);
    const json j = json::parse(is, nullptr, false);
    if (!j.is_discarded()) {
      if (j.contains("kind")) name = j.at("kind").get<std::string>();
      if (j.contains("fit_time_s")) fit_time = j.at("fit_time_s").get<double>();
    }
  }
  eval::MetricsReport rep = evaluate(*model, name);
  rep.params = eval::bundle_params(dir);
  rep.regression_time_s = fit_time;
  return rep;
}

void cmd_gen_data(const ExperimentConfig& config, const std::string& out) {
  fs::create_directories(out);
  const Truth truth = build_truth(config);
  const training::Dataset data = build_dataset(config, truth);
  training::write_dataset((fs::path(out) / "dataset.csv").string(), data);
  save_config((fs::path(out) / "config.json").string(), config);
  log::info("wrote ", data.size(), " samples to ", out);
}

void cmd_train(const ExperimentConfig& config, const std::string& out) {
  if (!is_network(config.model.kind)) {
    throw ConfigError("'train' handles pinn and tnn models; use 'regress' for " + config.model.kind);
  }
  fs::create_directories(out);
  const Truth truth = build_truth(config);
  fit_model(config, truth, build_dataset(config, truth), (fs::path(out) / "model").string());
  save_config((fs::path(out) / "config.json").string(), config);
}

void cmd_regress(const ExperimentConfig& config, const std::string& out) {
  if (is_network(config.model.kind)) {
    throw ConfigError("'regress' handles sh, mascon and elm models; use 'train' for " +
                      config.model.kind);
  }
  fs::create_directories(out);
  const Truth truth = build_truth(config);
  fit_model(config, truth, build_dataset(config, truth), (fs::path(out) / "model").string());
  save_config((fs::path(out) / "config.json").string(), config);
}

namespace {

std::vector<std::string> resolved_bundles(const ExperimentConfig& config) {
  if (config.bundles.empty()) throw ConfigError("no bundles listed in the config");
  std::vector<std::string> out;
  for (const auto& b : config.bundles) out.push_back(config.resolve(b));
  return out;
}

}  // namespace

void cmd_evaluate(const ExperimentConfig& config, const std::string& out) {
  fs::create_directories(out);
  const auto bundles = resolved_bundles(config);
  Evaluator ev(config, build_truth(config));
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const auto rep = ev.evaluate_bundle(bundles[i]);
    const std::string file = bundles.size() == 1 ? "report.json" : "report_" + std::to_string(i) + ".json";
    eval::write_report((fs::path(out) / file).string(), rep);
  }
}

void cmd_compare(const ExperimentConfig& config, const std::string& out) {
  fs::create_directories(out);
  const auto bundles = resolved_bundles(config);
  Evaluator ev(config, build_truth(config));
  std::vector<eval::MetricsReport> reports;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    reports.push_back(ev.evaluate_bundle(bundles[i]));
    eval::write_report((fs::path(out) / ("report_" + std::to_string(i) + ".json")).string(),
                       reports.back());
  }
  std::ofstream os(fs::path(out) / "compare.csv");
  if (!os) throw IoError("cannot write compare.csv in '" + out + "'");
  eval::write_compare_csv(os, reports);
}

void cmd_trajectory(const ExperimentConfig& config, const std::string& out) {
  fs::create_directories(out);
  const auto bundles = resolved_bundles(config);
  Evaluator ev(config, build_truth(config));
  const eval::Trajectory& truth = ev.truth_trajectory();
  json summary = json::array();
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const auto model = eval::load_any_bundle(bundles[i]);
    const eval::Trajectory traj = ev.model_trajectory(*model);
    std::ofstream os(fs::path(out) / ("trajectory_" + std::to_string(i) + ".csv"));
    if (!os) throw IoError("cannot write trajectory in '" + out + "'");
    os << "t,x,y,z,x_true,y_true,z_true,error_km,S_km\n" << std::setprecision(17);
    double S = 0.0;
    for (std::size_t j = 0; j < traj.times.size() && j < truth.times.size(); ++j) {
      const double err = (traj.positions[j] - truth.positions[j]).norm() / 1000.0;
      S += err;
      os << traj.times[j] << ',' << traj.positions[j].x() << ',' << traj.positions[j].y() << ','
         << traj.positions[j].z() << ',' << truth.positions[j].x() << ','
         << truth.positions[j].y() << ',' << truth.positions[j].z() << ',' << err << ',' << S
         << '\n';
    }
    json entry = {{"bundle", bundles[i]},
                  {"complete", traj.complete},
                  {"propagation_time_s", traj.wall_time},
                  {"samples", traj.times.size()}};
    if (traj.complete) {
      const auto e = eval::accumulated_error(traj, truth);
      entry["accumulated_error_km"] = e.S_km;
      entry["final_position_error_km"] = e.final_km;
    } else {
      entry["failure"] = traj.failure;
    }
    summary.push_back(entry);
  }
  write_json(fs::path(out) / "trajectory.json", summary);
}

namespace {

struct RegimeScorer {
  eval::AltitudeSets sets;
  std::vector<Vec3> a_ext, a_xtr;

  RegimeScorer(const Truth& truth, std::uint64_t seed)
      : sets(eval::altitude_sets(truth.R, truth.shape.get(), seed)),
        a_ext(truth.model->accelerations(sets.exterior)),
        a_xtr(truth.model->accelerations(sets.extrapolation)) {}

  std::pair<double, double> score(const analytic::GravityModel& m) const {
    return {eval::percent_error_stats(a_ext, m.accelerations(sets.exterior)).mean,
            eval::percent_error_stats(a_xtr, m.accelerations(sets.extrapolation)).mean};
  }
};

double validation_percent(const analytic::GravityModel& model, const analytic::GravityModel& truth,
                          const training::Dataset& data, const training::Hyperparams& hp) {
  auto [tr, va] = training::split(data.exterior_only(), hp.val_fraction, hp.seed);
  const training::Dataset& set = va.size() > 0 ? va : tr;
  return eval::percent_error(truth, model, set.positions);
}

}  // namespace

void cmd_ablate(const ExperimentConfig& config, const std::string& out) {
  const AblateSpec& a = config.ablate;
  const bool arch_grid = !a.depths.empty() && !a.widths.empty();
  const bool opt_grid = !a.batch_sizes.empty() && !a.learning_rates.empty();
  if (!arch_grid && !opt_grid) {
    throw ConfigError("ablation grid is empty: give depths+widths and/or batch_sizes+learning_rates");
  }
  if (!is_network(config.model.kind)) throw ConfigError("ablation needs a network model kind");
  fs::create_directories(out);
  const Truth truth = build_truth(config);
  const training::Dataset data = build_dataset(config, truth);
  const RegimeScorer scorer(truth, config.seed);

  std::ofstream os(fs::path(out) / "ablate.csv");
  if (!os) throw IoError("cannot write ablate.csv in '" + out + "'");
  os << "depth,width,batch_size,learning_rate,params,val_pct,exterior_pct,extrapolation_pct\n"
     << std::setprecision(10);

  std::vector<ExperimentConfig> cells;
  if (arch_grid) {
    for (int d : a.depths) {
      for (int w : a.widths) {
        ExperimentConfig c = config;
        c.model.depth = d;
        c.model.width = w;
        cells.push_back(c);
      }
    }
  }
  if (opt_grid) {
    for (int b : a.batch_sizes) {
      for (double lr : a.learning_rates) {
        ExperimentConfig c = config;
        c.training.batch_size = b;
        c.training.learning_rate = lr;
        cells.push_back(c);
      }
    }
  }
  json timing = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const ExperimentConfig& c = cells[i];
    const std::string dir = (fs::path(out) / ("cell_" + std::to_string(i))).string();
    const FitSummary fit = fit_model(c, truth, data, dir);
    const auto model = eval::load_any_bundle(dir);
    const auto [ext, xtr] = scorer.score(*model);
    const auto arch = pinn_spec(c.model);
    os << (c.model.kind == "tnn" ? tnn_arch(c.model).depth : arch.depth) << ','
       << (c.model.kind == "tnn" ? tnn_arch(c.model).width : arch.width) << ','
       << c.training.batch_size << ',' << c.training.learning_rate << ',' << fit.params << ','
       << validation_percent(*model, *truth.model, data, c.training) << ',' << ext << ',' << xtr
       << '\n';
    timing.push_back({{"cell", i}, {"fit_time_s", fit.fit_time}});
  }
  write_json(fs::path(out) / "timing.json", timing);
}

const std::vector<std::string>& ladder_stages() {
  static const std::vector<std::string> stages = {"I: features", "II: percent loss",
                                                  "III: proxy potential", "IV: boundary condition",
                                                  "V: fused analytic"};
  return stages;
}

ExperimentConfig ladder_stage(const ExperimentConfig& base, std::size_t index) {
  if (index >= ladder_stages().size()) throw InvalidArgument("ladder stage out of range");
  ExperimentConfig c = base;
  c.model.kind = "pinn";
  c.model.features = "radial5";
  c.training.loss = index >= 1 ? network::LossKind::kRmsPercent : network::LossKind::kRms;
  c.model.proxy = index >= 2;
  c.model.boundary = index >= 3;
  c.model.fusion = index >= 4;
  return c;
}

void cmd_mods_study(const ExperimentConfig& config, const std::string& out) {
  fs::create_directories(out);
  const Truth truth = build_truth(config);
  const training::Dataset data = build_dataset(config, truth);
  const eval::AltitudeSets sets = eval::altitude_sets(truth.R, truth.shape.get(), config.seed);
  const PointList limit = geometry::sample_shell(truth.R, 99.999, 100.0, 500, config.seed + 1);
  const auto a_int = truth.model->accelerations(sets.interior);
  const auto a_ext = truth.model->accelerations(sets.exterior);
  const auto a_xtr = truth.model->accelerations(sets.extrapolation);
  const auto a_lim = truth.model->accelerations(limit);

  std::ofstream os(fs::path(out) / "mods_study.csv");
  if (!os) throw IoError("cannot write mods_study.csv in '" + out + "'");
  os << "stage,name,params,interior_pct,exterior_pct,extrapolation_pct,limit_pct\n"
     << std::setprecision(10);
  for (std::size_t s = 0; s < ladder_stages().size(); ++s) {
    const ExperimentConfig c = ladder_stage(config, s);
    const std::string dir = (fs::path(out) / ("stage_" + std::to_string(s + 1))).string();
    fit_model(c, truth, data, dir);
    const auto model = eval::load_any_bundle(dir);
    const double interior =
        sets.interior.empty() ? 0.0
                              : eval::percent_error_stats(a_int, model->accelerations(sets.interior)).mean;
    os << s + 1 << ",\"" << ladder_stages()[s] << "\"," << model->parameter_count() << ','
       << interior << ',' << eval::percent_error_stats(a_ext, model->accelerations(sets.exterior)).mean
       << ',' << eval::percent_error_stats(a_xtr, model->accelerations(sets.extrapolation)).mean
       << ',' << eval::percent_error_stats(a_lim, model->accelerations(limit)).mean << '\n';
  }
}

}  // namespace pinngm::cli
