#include "pinngm/training/tnn.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "pinngm/common/error.hpp"
#include "pinngm/network/param_io.hpp"

namespace pinngm::training {

namespace fs = std::filesystem;

MinMax MinMax::fit(const std::vector<Vec3>& values) {
  if (values.empty()) throw InvalidArgument("cannot fit a min-max scaling to no data");
  MinMax m;
  m.lo = values.front();
  m.hi = values.front();
  for (const auto& v : values) {
    m.lo = m.lo.cwiseMin(v);
    m.hi = m.hi.cwiseMax(v);
  }
  for (int j = 0; j < 3; ++j) {
    if (!(m.hi[j] > m.lo[j])) m.hi[j] = m.lo[j] + 1.0;
  }
  return m;
}

Vec3 MinMax::forward(const Vec3& v) const { return (v - lo).cwiseQuotient(hi - lo); }
Vec3 MinMax::inverse(const Vec3& v) const { return lo + v.cwiseProduct(hi - lo); }

TnnModel::TnnModel(network::MlpParams params, MinMax input, MinMax output)
    : params_(std::move(params)), in_(input), out_(output) {
  if (params_.arch.wiring != network::Wiring::kPlain || params_.arch.in_dim != 3 ||
      params_.arch.out_dim != 3) {
    throw InvalidArgument("TNN needs a plain 3 -> 3 network");
  }
}

analytic::GravityEval TnnModel::evaluate(const Vec3& x) const {
  MatX X = in_.forward(x);
  const MatX Y = network::forward_jets(params_, X, 1, 0);
  return {analytic::kNaN, out_.inverse(Vec3(Y(0, 0), Y(1, 0), Y(2, 0)))};
}

std::vector<Vec3> TnnModel::accelerations(const PointList& points) const {
  std::vector<Vec3> out;
  out.reserve(points.size());
  constexpr std::size_t kChunk = 4096;
  for (std::size_t s = 0; s < points.size(); s += kChunk) {
    const std::size_t m = std::min(kChunk, points.size() - s);
    MatX X(3, static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) X.col(static_cast<Eigen::Index>(i)) = in_.forward(points[s + i]);
    const MatX Y = network::forward_jets(params_, X, static_cast<int>(m), 0);
    for (std::size_t i = 0; i < m; ++i) {
      out.push_back(out_.inverse(Y.col(static_cast<Eigen::Index>(i))));
    }
  }
  return out;
}

TnnTrainResult train_tnn(const Dataset& data, const Hyperparams& hp, const TnnArchitecture& arch) {
  data.validate();
  hp.validate();
  auto [train_set, val_set] = split(data, hp.val_fraction, hp.seed);
  if (train_set.size() == 0) throw InvalidArgument("training split is empty");
  const MinMax in = MinMax::fit(train_set.positions);
  const MinMax out = MinMax::fit(train_set.accelerations);
  network::MlpArch a{network::Wiring::kPlain, arch.depth, arch.width, 3, 3, 0};
  TnnTrainResult result{TnnModel(network::init_params(a, hp.seed), in, out), {}};
  if (hp.num_epochs == 0) {
    result.history.stop_reason = "no epochs requested";
    return result;
  }

  auto normalize = [&](const Dataset& d, MatX& X, MatX& Y) {
    X.resize(3, static_cast<Eigen::Index>(d.size()));
    Y.resize(3, static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      X.col(static_cast<Eigen::Index>(i)) = in.forward(d.positions[i]);
      Y.col(static_cast<Eigen::Index>(i)) = out.forward(d.accelerations[i]);
    }
  };
  MatX Xt, Yt, Xv, Yv;
  normalize(train_set, Xt, Yt);
  if (val_set.size() > 0) {
    normalize(val_set, Xv, Yv);
  } else {
    Xv = Xt;
    Yv = Yt;
  }

  network::MlpParams& params = result.model.mutable_params();
  Objective obj;
  obj.n_train = train_set.size();
  obj.batch_loss = [&](const std::vector<std::size_t>& rows, VecX* grad) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    MatX X(3, n), T(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X.col(i) = Xt.col(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]));
      T.col(i) = Yt.col(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]));
    }
    network::JetCache cache;
    const MatX Y = network::forward_jets(params, X, static_cast<int>(n), 0,
                                         grad != nullptr ? &cache : nullptr);
    const MatX E = Y - T;
    if (grad != nullptr) {
      grad->setZero();
      network::backward_jets(params, cache, (2.0 / static_cast<double>(n)) * E, *grad);
    }
    return E.squaredNorm() / static_cast<double>(n);
  };
  obj.validation_loss = [&]() {
    const MatX Y = network::forward_jets(params, Xv, static_cast<int>(Xv.cols()), 0);
    return (Y - Yv).squaredNorm() / static_cast<double>(Xv.cols());
  };
  result.history = optimize(params.theta, obj, hp);
  return result;
}

void save_tnn_bundle(const std::string& dir, const TnnModel& model) {
  fs::create_directories(dir);
  auto vec = [](const Vec3& v) { return std::vector<double>{v.x(), v.y(), v.z()}; };
  nlohmann::json j;
  j["kind"] = "tnn";
  j["params"] = model.parameter_count();
  j["network"] = {{"depth", model.params().arch.depth},
                  {"width", model.params().arch.width},
                  {"seed", model.params().seed},
                  {"file", "params.bin"}};
  j["input_scaling"] = {{"lo", vec(model.input_scaling().lo)}, {"hi", vec(model.input_scaling().hi)}};
  j["output_scaling"] = {{"lo", vec(model.output_scaling().lo)},
                         {"hi", vec(model.output_scaling().hi)}};
  std::ofstream os(fs::path(dir) / "model.json");
  if (!os) throw IoError("cannot write bundle in '" + dir + "'");
  os << j.dump(2) << '\n';
  network::write_params_file((fs::path(dir) / "params.bin").string(), model.params());
}

TnnModel load_tnn_bundle(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "model.json");
  if (!is) throw IoError("no model.json in '" + dir + "'");
  try {
    nlohmann::json j;
    is >> j;
    if (j.at("kind").get<std::string>() != "tnn") throw IoError("bundle is not a TNN model");
    auto vec = [](const nlohmann::json& v) {
      const auto a = v.get<std::vector<double>>();
      if (a.size() != 3) throw IoError("scaling vector must have 3 entries");
      return Vec3(a[0], a[1], a[2]);
    };
    MinMax in{vec(j.at("input_scaling").at("lo")), vec(j.at("input_scaling").at("hi"))};
    MinMax out{vec(j.at("output_scaling").at("lo")), vec(j.at("output_scaling").at("hi"))};
    auto params = network::read_params_file(
        (fs::path(dir) / j.at("network").at("file").get<std::string>()).string());
    return TnnModel(std::move(params), in, out);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed model.json in '" + dir + "': " + e.what());
  }
}

}  // namespace pinngm::training
