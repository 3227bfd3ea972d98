/**
 * @file test_cli.cpp
 * @brief Experiment configs, the command implementations and the pinngm
 * executable's exit codes.
 */
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pinngm/common/error.hpp"
#include "pinngm/eval/bundles.hpp"
#include "pinngm/eval/report.hpp"
#include "pinngm_cli/commands.hpp"
#include "pinngm_cli/config.hpp"
#include "test_support.hpp"

using namespace pinngm;
using namespace pinngm::cli;
namespace fs = std::filesystem;

namespace {

const std::string kShapes = std::string(PINNGM_SOURCE_DIR) + "/data/shapes";

ExperimentConfig small_config(const std::string& kind) {
  ExperimentConfig c;
  c.name = "test-" + kind;
  c.truth.kind = "heterogeneous";
  c.truth.shape = kShapes + "/eros_like_coarse.obj";
  c.dataset.n = 400;
  c.dataset.r_min = 0.0;
  c.dataset.r_max = 10.0;
  c.dataset.seed = 3;
  c.model.kind = kind;
  c.model.size = "small";
  c.model.seed = 3;
  c.training.num_epochs = 5;
  c.training.batch_size = 256;
  c.training.seed = 3;
  c.metrics = {"generalization"};
  c.seed = 3;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(PINNGM_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> csv_lines(const std::string& path) {
  std::ifstream is(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);) {
    if (!l.empty()) lines.push_back(l);
  }
  return lines;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = small_config("pinn3");
  c.truth.anomalies = {{Vec3(1, 2, 3), 5.0}};
  c.model.r_ref = 7.5;
  c.model.features = "cartesian";
  c.training.loss = network::LossKind::kAl;
  c.ablate.depths = {2, 4};
  c.ablate.learning_rates = {0.01};
  c.bundles = {"a", "b"};
  c.trajectory.duration = 1234.0;
  const auto back = config_from_json_text(to_json_text(c));
  EXPECT_EQ(to_json_text(back), to_json_text(c));
  EXPECT_EQ(back.truth.anomalies.size(), 1u);
  EXPECT_DOUBLE_EQ(back.model.r_ref, 7.5);
  EXPECT_EQ(back.training.loss, network::LossKind::kAl);
  EXPECT_EQ(back.ablate.depths, (std::vector<int>{2, 4}));
}

TEST(Config, DefaultsFromSparseJson) {
  const auto c = config_from_json_text(R"({"truth": {"kind": "point_mass_j2", "c20": -0.1}})");
  EXPECT_EQ(c.model.kind, "pinn3");
  EXPECT_EQ(c.training.batch_size, 2048);
  EXPECT_DOUBLE_EQ(c.truth.c20, -0.1);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ValidationRejectsBadFields) {
  auto expect_invalid = [](auto mutate) {
    ExperimentConfig c = small_config("pinn3");
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  expect_invalid([](ExperimentConfig& c) { c.truth.kind = "cube"; });
  expect_invalid([](ExperimentConfig& c) { c.truth.shape.clear(); });
  expect_invalid([](ExperimentConfig& c) { c.truth.mu = -1.0; });
  expect_invalid([](ExperimentConfig& c) { c.dataset.r_min = 5.0; c.dataset.r_max = 2.0; });
  expect_invalid([](ExperimentConfig& c) { c.dataset.source = "volume"; });
  expect_invalid([](ExperimentConfig& c) { c.model.kind = "gp"; });
  expect_invalid([](ExperimentConfig& c) { c.model.size = "xl"; });
  expect_invalid([](ExperimentConfig& c) { c.training.learning_rate = 0.0; });
  expect_invalid([](ExperimentConfig& c) { c.metrics = {"energy"}; });
  expect_invalid([](ExperimentConfig& c) { c.trajectory.e = 1.0; });
  EXPECT_THROW(config_from_json_text("{not json"), ConfigError);
  EXPECT_THROW(config_from_json_text(R"({"training": {"loss": "huber"}})"), Error);
}

TEST(Config, RelativePathsResolveAgainstConfigDirectory) {
  const std::string dir = test::scratch_dir("cfg_paths");
  ExperimentConfig c = small_config("pinn3");
  c.truth.shape = "shapes/x.obj";
  save_config(dir + "/c.json", c);
  const auto back = load_config(dir + "/c.json");
  EXPECT_EQ(back.resolve(back.truth.shape), (fs::path(dir) / "shapes/x.obj").string());
  EXPECT_EQ(back.resolve("/abs/p"), "/abs/p");
  EXPECT_THROW(load_config(dir + "/missing.json"), ConfigError);
}

TEST(Config, SeedOverrideReachesEverySeed) {
  ExperimentConfig c = small_config("pinn3");
  c.override_seed(42);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.dataset.seed, 42u);
  EXPECT_EQ(c.model.seed, 42u);
  EXPECT_EQ(c.training.seed, 42u);
}

TEST(ExitCodes, OnePerCategory) {
  EXPECT_EQ(exit_code(ErrorCategory::kConfig), 2);
  EXPECT_EQ(exit_code(ErrorCategory::kIo), 3);
  EXPECT_EQ(exit_code(ErrorCategory::kGeometry), 4);
  EXPECT_EQ(exit_code(ErrorCategory::kSingularity), 5);
  EXPECT_EQ(exit_code(ErrorCategory::kNumerical), 6);
  EXPECT_EQ(exit_code(ErrorCategory::kInvalidArgument), 7);
}

TEST(Tool, ExitCodesFromTheExecutable) {
  const std::string dir = test::scratch_dir("tool_exit");
  EXPECT_EQ(run_tool("--help"), 0);
  EXPECT_EQ(run_tool(""), 2);
  EXPECT_EQ(run_tool("gen-data"), 2);
  EXPECT_EQ(run_tool("gen-data --config " + dir + "/none.json"), 2);

  ExperimentConfig c = small_config("pinn3");
  c.truth.shape = dir + "/missing.obj";
  save_config(dir + "/missing_shape.json", c);
  EXPECT_EQ(run_tool("gen-data --config " + dir + "/missing_shape.json --out " + dir + "/o"), 2);

  std::ofstream(dir + "/open.obj") << "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 1 4 3\n";
  c.truth.shape = "open.obj";
  save_config(dir + "/open_shape.json", c);
  EXPECT_EQ(run_tool("gen-data --config " + dir + "/open_shape.json --out " + dir + "/o"), 4);

  c = small_config("pinn3");
  c.training.batch_size = 0;
  save_config(dir + "/bad_hp.json", c);
  EXPECT_EQ(run_tool("train --config " + dir + "/bad_hp.json --out " + dir + "/o"), 2);

  c = small_config("sh");
  save_config(dir + "/wrong_cmd.json", c);
  EXPECT_EQ(run_tool("train --config " + dir + "/wrong_cmd.json --out " + dir + "/o"), 2);
}

TEST(Tool, GenDataIsReproducibleAndSeedSensitive) {
  const std::string dir = test::scratch_dir("tool_gen");
  ExperimentConfig c = small_config("pinn3");
  save_config(dir + "/c.json", c);
  ASSERT_EQ(run_tool("gen-data --config " + dir + "/c.json --out " + dir + "/a"), 0);
  ASSERT_EQ(run_tool("gen-data --config " + dir + "/c.json --out " + dir + "/b"), 0);
  ASSERT_EQ(run_tool("gen-data --config " + dir + "/c.json --seed 9 --out " + dir + "/s"), 0);
  const std::string a = slurp(dir + "/a/dataset.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir + "/b/dataset.csv"));
  EXPECT_NE(a, slurp(dir + "/s/dataset.csv"));
  EXPECT_EQ(csv_lines(dir + "/a/dataset.csv").size(), 401u);
}

TEST(Commands, GenDataFlagsInteriorSamples) {
  const std::string dir = test::scratch_dir("cmd_gen");
  const auto c = small_config("pinn3");
  cmd_gen_data(c, dir);
  const auto d = training::read_dataset(dir + "/dataset.csv");
  const auto truth = build_truth(c);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.interior[i], geometry::contains(*truth.shape, d.positions[i]));
    inside += d.interior[i] ? 1 : 0;
  }
  EXPECT_GT(inside, 0u);
  EXPECT_TRUE(fs::exists(dir + "/config.json"));
}

TEST(Commands, SizePresetsGiveStatedParameterCounts) {
  const std::string dir = test::scratch_dir("cmd_budget");
  for (const auto& [kind, cmd] : std::vector<std::pair<std::string, decltype(&cmd_train)>>{
           {"pinn3", &cmd_train}, {"tnn", &cmd_train}}) {
    auto c = small_config(kind);
    cmd(c, dir + "/" + kind);
  }
  EXPECT_EQ(eval::bundle_params(dir + "/pinn3/model"), 227u);
  EXPECT_EQ(eval::bundle_params(dir + "/tnn/model"), 243u);

  auto sh = small_config("sh");
  sh.model.alpha = 1e-6;
  sh.model.param_budget = 240;
  cmd_regress(sh, dir + "/sh");
  const auto fit = nlohmann::json::parse(slurp(dir + "/sh/model/fit.json"));
  EXPECT_EQ(fit.at("l_max").get<int>(), 15);
  EXPECT_EQ(eval::bundle_params(dir + "/sh/model"), 256u);

  auto masc = small_config("mascon");
  masc.model.param_budget = 220;
  cmd_regress(masc, dir + "/mascon");
  EXPECT_EQ(eval::bundle_params(dir + "/mascon/model"), 220u);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir + "/mascon/model/fit.json")).at("mascons"), 55);

  auto elm = small_config("elm");
  elm.model.param_budget = 250;
  cmd_regress(elm, dir + "/elm");
  const std::size_t h = (250 - 3) / 7;
  EXPECT_EQ(eval::bundle_params(dir + "/elm/model"), 3 * h + h + 3 * (h + 1));
}

TEST(Commands, EvaluatingTheTruthGivesZeroErrors) {
  auto c = small_config("pinn3");
  c.metrics = {"planes", "generalization", "surface", "trajectory"};
  c.trajectory.duration = 864.0;
  const Truth truth = build_truth(c);
  Evaluator ev(c, truth);
  const auto r = ev.evaluate(*truth.model, "truth");
  EXPECT_DOUBLE_EQ(*r.planes_pct, 0.0);
  EXPECT_DOUBLE_EQ(*r.interior_pct, 0.0);
  EXPECT_DOUBLE_EQ(*r.exterior_pct, 0.0);
  EXPECT_DOUBLE_EQ(*r.extrapolation_pct, 0.0);
  EXPECT_DOUBLE_EQ(*r.surface_pct, 0.0);
  EXPECT_NEAR(*r.accumulated_error_km, 0.0, 1e-6);
  EXPECT_EQ(r.params, truth.model->parameter_count());
}

TEST(Commands, CompareWritesReportsAndTable) {
  const std::string dir = test::scratch_dir("cmd_compare");
  auto p = small_config("pinn3");
  cmd_train(p, dir + "/pinn");
  auto m = small_config("mascon");
  m.model.mascons = 20;
  cmd_regress(m, dir + "/mascon");
  auto c = small_config("pinn3");
  c.metrics = {"generalization", "trajectory"};
  c.trajectory.duration = 864.0;
  c.bundles = {dir + "/pinn/model", dir + "/mascon/model"};
  cmd_compare(c, dir + "/cmp");
  const auto lines = csv_lines(dir + "/cmp/compare.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1].rfind("pinn3,NA,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("mascon,NA,", 0), 0u);
  const auto r0 = eval::read_report(dir + "/cmp/report_0.json");
  EXPECT_EQ(r0.params, 227u);
  EXPECT_TRUE(r0.exterior_pct.has_value());
  EXPECT_TRUE(r0.accumulated_error_km.has_value());
  EXPECT_TRUE(r0.regression_time_s.has_value());
  const auto r1 = eval::read_report(dir + "/cmp/report_1.json");
  EXPECT_EQ(r1.params, 80u);
}

TEST(Commands, TrajectoryWritesSampledOrbits) {
  const std::string dir = test::scratch_dir("cmd_traj");
  const Truth truth = build_truth(small_config("pinn3"));
  eval::save_point_mass_bundle(dir + "/pm", truth.mu);
  auto c = small_config("pinn3");
  c.trajectory.duration = 864.0;
  c.bundles = {dir + "/pm"};
  cmd_trajectory(c, dir + "/out");
  const auto lines = csv_lines(dir + "/out/trajectory_0.csv");
  EXPECT_EQ(lines.size(), 12u);
  const auto j = nlohmann::json::parse(slurp(dir + "/out/trajectory.json"));
  EXPECT_FALSE(j.empty());
}

TEST(Commands, AblationGridHasOneRowPerCell) {
  const std::string dir = test::scratch_dir("cmd_ablate");
  auto c = small_config("pinn3");
  c.training.num_epochs = 2;
  c.ablate.depths = {2, 3, 4, 5};
  c.ablate.widths = {4, 6, 8, 10};
  cmd_ablate(c, dir);
  const auto lines = csv_lines(dir + "/ablate.csv");
  ASSERT_EQ(lines.size(), 17u);
  EXPECT_EQ(lines[0], "depth,width,batch_size,learning_rate,params,val_pct,exterior_pct,extrapolation_pct");
  EXPECT_EQ(lines[1].rfind("2,4,", 0), 0u);
  EXPECT_EQ(lines[16].rfind("5,10,", 0), 0u);
  EXPECT_TRUE(fs::exists(dir + "/timing.json"));

  auto empty = small_config("pinn3");
  EXPECT_THROW(cmd_ablate(empty, dir + "/e"), ConfigError);
  auto reg = small_config("sh");
  reg.ablate.depths = {2};
  reg.ablate.widths = {4};
  EXPECT_THROW(cmd_ablate(reg, dir + "/r"), ConfigError);
}

TEST(Commands, ModificationStudyHasFiveStages) {
  ASSERT_EQ(ladder_stages().size(), 5u);
  const auto base = small_config("pinn3");
  const auto s0 = ladder_stage(base, 0);
  EXPECT_FALSE(s0.model.proxy || s0.model.boundary || s0.model.fusion);
  EXPECT_EQ(s0.training.loss, network::LossKind::kRms);
  const auto s4 = ladder_stage(base, 4);
  EXPECT_TRUE(s4.model.proxy && s4.model.boundary && s4.model.fusion);
  EXPECT_THROW(ladder_stage(base, 5), InvalidArgument);

  const std::string dir = test::scratch_dir("cmd_mods");
  auto c = small_config("pinn3");
  c.training.num_epochs = 2;
  cmd_mods_study(c, dir);
  const auto lines = csv_lines(dir + "/mods_study.csv");
  ASSERT_EQ(lines.size(), 6u);
  for (int s = 1; s <= 5; ++s) EXPECT_EQ(lines[s].rfind(std::to_string(s) + ",", 0), 0u);
}

TEST(Commands, ParameterAuditMatchesLoadedModels) {
  const std::string dir = test::scratch_dir("cmd_audit");
  for (const std::string kind : {"pinn3", "tnn"}) {
    auto c = small_config(kind);
    c.model.size = "medium";
    c.training.num_epochs = 1;
    cmd_train(c, dir + "/" + kind);
    const auto m = eval::load_any_bundle(dir + "/" + kind + "/model");
    EXPECT_EQ(eval::bundle_params(dir + "/" + kind + "/model"), m->parameter_count()) << kind;
    const auto fit = nlohmann::json::parse(slurp(dir + "/" + kind + "/model/fit.json"));
    EXPECT_EQ(fit.at("params").get<std::size_t>(), m->parameter_count()) << kind;
  }
}
