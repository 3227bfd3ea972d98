#include "pinngm/pinn/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "pinngm/common/error.hpp"
#include "pinngm/network/param_io.hpp"

namespace pinngm::pinn {

namespace fs = std::filesystem;
using nlohmann::json;

void save_pinn_bundle(const std::string& dir, const PinnModel& model) {
  fs::create_directories(dir);
  const BoundaryConfig b = model.boundary();
  const FusionConfig& f = model.fusion();
  const auto& a = model.params().arch;
  json j;
  j["kind"] = "pinn";
  j["params"] = model.parameter_count();
  j["network"] = {{"wiring", network::to_string(a.wiring)},
                  {"depth", a.depth},
                  {"width", a.width},
                  {"in_dim", a.in_dim},
                  {"seed", model.params().seed},
                  {"file", "params.bin"}};
  j["constants"] = {{"x_star", model.constants().x_star},
                    {"U_star", model.constants().U_star},
                    {"t_star", model.constants().t_star},
                    {"a_star", model.constants().a_star}};
  j["boundary"] = {{"enabled", b.enabled}, {"k", b.k}, {"r_ref", b.r_ref}, {"trainable", b.trainable}};
  j["fusion"] = {{"enabled", f.enabled},
                 {"R_star", f.R_star},
                 {"k_star", f.k_star},
                 {"lf", {{"mu", f.lf.mu}, {"R", f.lf.R}, {"c20", f.lf.c20}}}};
  j["pipeline"] = {{"features", to_string(model.options().features)},
                   {"proxy", model.options().proxy}};
  std::ofstream os(fs::path(dir) / "model.json");
  if (!os) throw IoError("cannot write bundle in '" + dir + "'");
  os << j.dump(2) << '\n';
  network::write_params_file((fs::path(dir) / "params.bin").string(), model.params());
}

PinnModel load_pinn_bundle(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "model.json");
  if (!is) throw IoError("no model.json in '" + dir + "'");
  json j;
  try {
    is >> j;
    if (j.at("kind").get<std::string>() != "pinn") throw IoError("bundle is not a PINN model");
    network::MlpParams params = network::read_params_file(
        (fs::path(dir) / j.at("network").at("file").get<std::string>()).string());
    const auto& c = j.at("constants");
    NonDimConstants k;
    k.x_star = c.at("x_star").get<double>();
    k.U_star = c.at("U_star").get<double>();
    k.t_star = c.at("t_star").get<double>();
    k.a_star = c.at("a_star").get<double>();
    BoundaryConfig b;
    b.enabled = j.at("boundary").at("enabled").get<bool>();
    b.k = j.at("boundary").at("k").get<double>();
    b.r_ref = j.at("boundary").at("r_ref").get<double>();
    b.trainable = j.at("boundary").at("trainable").get<bool>();
    FusionConfig f;
    f.enabled = j.at("fusion").at("enabled").get<bool>();
    f.R_star = j.at("fusion").at("R_star").get<double>();
    f.k_star = j.at("fusion").at("k_star").get<double>();
    f.lf.mu = j.at("fusion").at("lf").at("mu").get<double>();
    f.lf.R = j.at("fusion").at("lf").at("R").get<double>();
    f.lf.c20 = j.at("fusion").at("lf").at("c20").get<double>();
    PipelineOptions o;
    o.features = feature_kind_from_string(j.at("pipeline").at("features").get<std::string>());
    o.proxy = j.at("pipeline").at("proxy").get<bool>();
    // The constructor overwrites the transition scalars from b, which holds
    // the same values as the parameter file.
    return PinnModel(std::move(params), k, b, f, o);
  } catch (const json::exception& e) {
    throw IoError("malformed model.json in '" + dir + "': " + e.what());
  }
}

}  // namespace pinngm::pinn
