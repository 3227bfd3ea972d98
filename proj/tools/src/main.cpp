#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"
#include "pinngm_cli/commands.hpp"

namespace {

using Command = void (*)(const pinngm::cli::ExperimentConfig&, const std::string&);

}  // namespace

int main(int argc, char** argv) {
  using namespace pinngm;
  CLI::App app{"pinngm: physics-informed gravity models, classical baselines and metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  const std::pair<const char*, Command> commands[] = {
      {"gen-data", cli::cmd_gen_data},     {"train", cli::cmd_train},
      {"regress", cli::cmd_regress},       {"evaluate", cli::cmd_evaluate},
      {"compare", cli::cmd_compare},       {"trajectory", cli::cmd_trajectory},
      {"ablate", cli::cmd_ablate},         {"mods-study", cli::cmd_mods_study},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out, "Output directory");
    seed_opts.push_back(sub->add_option("--seed", seed, "Override every seed in the config"));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code(ErrorCategory::kConfig);
  }
  log::set_level(verbose ? log::Level::kInfo : log::Level::kWarn);

  try {
    cli::ExperimentConfig config = cli::load_config(config_path);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      if (seed_opts[i]->count() > 0) config.override_seed(seed);
      config.validate();
      commands[i].second(config, out);
    }
  } catch (const Error& e) {
    std::cerr << "pinngm: " << to_string(e.category()) << " error: " << e.what() << '\n';
    return cli::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "pinngm: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
