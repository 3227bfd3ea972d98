#include "pinngm/regress/elm.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/regress/rls.hpp"

namespace pinngm::regress {

namespace fs = std::filesystem;

ElmModel::ElmModel(MatX input_weights, VecX input_bias, MatX output_weights,
                   training::MinMax input, training::MinMax output, std::uint64_t seed)
    : W_(std::move(input_weights)),
      b_(std::move(input_bias)),
      beta_(std::move(output_weights)),
      in_(input),
      out_(output),
      seed_(seed) {
  if (W_.cols() != 3 || b_.size() != W_.rows() || beta_.rows() != W_.rows() + 1 ||
      beta_.cols() != 3) {
    throw InvalidArgument("inconsistent ELM dimensions");
  }
}

VecX ElmModel::hidden(const Vec3& s) const {
  VecX h(W_.rows() + 1);
  h.head(W_.rows()) = (-(W_ * s + b_)).array().exp().unaryExpr([](double e) { return 1.0 / (1.0 + e); });
  h[W_.rows()] = 1.0;
  return h;
}

analytic::GravityEval ElmModel::evaluate(const Vec3& x) const {
  const VecX h = hidden(in_.forward(x));
  const Vec3 y = beta_.transpose() * h;
  return {analytic::kNaN, out_.inverse(y)};
}

std::size_t ElmModel::parameter_count() const {
  return static_cast<std::size_t>(W_.size() + b_.size() + beta_.size());
}

void elm_design(const ElmModel& model, const training::Dataset& data, MatX& Phi, MatX& Y) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Phi.resize(n, model.n_hidden() + 1);
  Y.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    Phi.row(i) = model.hidden(model.input_scaling().forward(data.positions[k])).transpose();
    Y.row(i) = model.output_scaling().forward(data.accelerations[k]).transpose();
  }
}

ElmModel regress_elm(const training::Dataset& data, int n_hidden, double alpha, std::uint64_t seed,
                     int batch_points) {
  if (n_hidden < 1) throw InvalidArgument("ELM needs at least one hidden node");
  if (!(alpha >= 0.0)) throw InvalidArgument("ELM ridge alpha must be >= 0");
  if (data.size() == 0) throw InvalidArgument("ELM regression needs data");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatX W(n_hidden, 3);
  VecX b(n_hidden);
  for (Eigen::Index c = 0; c < 3; ++c) {
    for (Eigen::Index r = 0; r < n_hidden; ++r) W(r, c) = u(rng);
  }
  for (Eigen::Index r = 0; r < n_hidden; ++r) b[r] = u(rng);

  ElmModel model(W, b, MatX::Zero(n_hidden + 1, 3), training::MinMax::fit(data.positions),
                 training::MinMax::fit(data.accelerations), seed);
  MatX Phi, Y;
  elm_design(model, data, Phi, Y);
  const MatX Gamma = alpha * MatX::Identity(n_hidden + 1, n_hidden + 1);
  const RlsState s = rls_stream(Phi, Y, Gamma, batch_points);
  return ElmModel(W, b, s.c, model.input_scaling(), model.output_scaling(), seed);
}

namespace {

std::vector<double> flat(const MatX& m) { return {m.data(), m.data() + m.size()}; }

MatX unflat(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != rows * cols) throw IoError("ELM array has wrong size");
  return Eigen::Map<const MatX>(v.data(), rows, cols);
}

}  // namespace

void save_elm_bundle(const std::string& dir, const ElmModel& model) {
  fs::create_directories(dir);
  auto vec = [](const Vec3& v) { return std::vector<double>{v.x(), v.y(), v.z()}; };
  nlohmann::json j;
  j["kind"] = "elm";
  j["params"] = model.parameter_count();
  j["seed"] = model.seed();
  j["n_hidden"] = model.n_hidden();
  j["input_weights"] = flat(model.input_weights());
  j["input_bias"] = flat(model.input_bias());
  j["output_weights"] = flat(model.output_weights());
  j["input_scaling"] = {{"lo", vec(model.input_scaling().lo)}, {"hi", vec(model.input_scaling().hi)}};
  j["output_scaling"] = {{"lo", vec(model.output_scaling().lo)},
                         {"hi", vec(model.output_scaling().hi)}};
  std::ofstream os(fs::path(dir) / "model.json");
  if (!os) throw IoError("cannot write bundle in '" + dir + "'");
  os << j.dump(2) << '\n';
}

ElmModel load_elm_bundle(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "model.json");
  if (!is) throw IoError("no model.json in '" + dir + "'");
  try {
    nlohmann::json j;
    is >> j;
    if (j.at("kind").get<std::string>() != "elm") throw IoError("bundle is not an ELM model");
    const int h = j.at("n_hidden").get<int>();
    auto vec = [](const nlohmann::json& v) {
      const auto a = v.get<std::vector<double>>();
      if (a.size() != 3) throw IoError("scaling vector must have 3 entries");
      return Vec3(a[0], a[1], a[2]);
    };
    return ElmModel(unflat(j.at("input_weights"), h, 3), unflat(j.at("input_bias"), h, 1),
                    unflat(j.at("output_weights"), h + 1, 3),
                    {vec(j.at("input_scaling").at("lo")), vec(j.at("input_scaling").at("hi"))},
                    {vec(j.at("output_scaling").at("lo")), vec(j.at("output_scaling").at("hi"))},
                    j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed model.json in '" + dir + "': " + e.what());
  }
}

}  // namespace pinngm::regress
