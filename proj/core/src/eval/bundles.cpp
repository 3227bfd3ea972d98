#include "pinngm/eval/bundles.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "pinngm/analytic/point_mass.hpp"
#include "pinngm/common/error.hpp"
#include "pinngm/pinn/bundle.hpp"
#include "pinngm/regress/elm.hpp"
#include "pinngm/training/tnn.hpp"

namespace pinngm::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_model_json(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "model.json");
  if (!is) throw IoError("no model.json in '" + dir + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw IoError("malformed model.json in '" + dir + "': " + e.what());
  }
}

void write_model_json(const std::string& dir, const json& j) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / "model.json");
  if (!os) throw IoError("cannot write bundle in '" + dir + "'");
  os << j.dump(2) << '\n';
}

template <typename T>
T field(const json& j, const char* key, const std::string& dir) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError("model.json in '" + dir + "' lacks '" + key + "': " + e.what());
  }
}

}  // namespace

std::string bundle_kind(const std::string& dir) {
  return field<std::string>(read_model_json(dir), "kind", dir);
}

std::size_t bundle_params(const std::string& dir) {
  return field<std::size_t>(read_model_json(dir), "params", dir);
}

std::shared_ptr<analytic::GravityModel> load_any_bundle(const std::string& dir) {
  const json j = read_model_json(dir);
  const auto kind = field<std::string>(j, "kind", dir);
  const fs::path base(dir);
  if (kind == "pinn") return std::make_shared<pinn::PinnModel>(pinn::load_pinn_bundle(dir));
  if (kind == "tnn") return std::make_shared<training::TnnModel>(training::load_tnn_bundle(dir));
  if (kind == "elm") return std::make_shared<regress::ElmModel>(regress::load_elm_bundle(dir));
  if (kind == "sh") {
    return std::make_shared<analytic::SphericalHarmonicModel>(
        analytic::read_sh_file((base / field<std::string>(j, "file", dir)).string()));
  }
  if (kind == "mascon") {
    std::ifstream is(base / field<std::string>(j, "file", dir));
    if (!is) throw IoError("missing mascon file in '" + dir + "'");
    return std::make_shared<analytic::MasconModel>(analytic::read_mascons(is));
  }
  if (kind == "polyhedral") {
    geometry::LoadOptions opts;
    opts.recenter = false;
    opts.principal_axes = false;
    auto shape = std::make_shared<const geometry::ShapeModel>(
        geometry::load_shape_file((base / field<std::string>(j, "shape", dir)).string(), opts));
    return std::make_shared<analytic::PolyhedralModel>(shape, field<double>(j, "mu", dir));
  }
  if (kind == "point_mass") {
    return std::make_shared<analytic::PointMassModel>(field<double>(j, "mu", dir));
  }
  throw IoError("unknown bundle kind '" + kind + "' in '" + dir + "'");
}

void save_sh_bundle(const std::string& dir, const analytic::SphericalHarmonicModel& model) {
  write_model_json(dir, {{"kind", "sh"},
                         {"params", model.parameter_count()},
                         {"l_max", model.l_max()},
                         {"mu", model.mu()},
                         {"R", model.radius()},
                         {"file", "coefficients.txt"}});
  analytic::write_sh_file((fs::path(dir) / "coefficients.txt").string(), model);
}

void save_mascon_bundle(const std::string& dir, const analytic::MasconModel& model, double mu,
                        double R) {
  write_model_json(dir, {{"kind", "mascon"},
                         {"params", model.parameter_count()},
                         {"count", model.size()},
                         {"mu", mu},
                         {"R", R},
                         {"file", "mascons.csv"}});
  std::ofstream os(fs::path(dir) / "mascons.csv");
  if (!os) throw IoError("cannot write mascons in '" + dir + "'");
  analytic::write_mascons(os, model);
}

void save_polyhedral_bundle(const std::string& dir, const analytic::PolyhedralModel& model) {
  write_model_json(dir, {{"kind", "polyhedral"},
                         {"params", model.parameter_count()},
                         {"mu", model.mu()},
                         {"facets", model.shape().facet_count()},
                         {"vertices", model.shape().vertex_count()},
                         {"shape", "shape.obj"}});
  geometry::write_obj_file((fs::path(dir) / "shape.obj").string(), model.shape());
}

void save_point_mass_bundle(const std::string& dir, double mu) {
  write_model_json(dir, {{"kind", "point_mass"}, {"params", 1}, {"mu", mu}});
}

}  // namespace pinngm::eval
