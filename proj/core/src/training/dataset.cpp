#include "pinngm/training/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "pinngm/common/error.hpp"
#include "pinngm/geometry/sampling.hpp"

namespace pinngm::training {

void Dataset::validate() const {
  const std::size_t n = positions.size();
  if (accelerations.size() != n || (potentials && potentials->size() != n) ||
      (!interior.empty() && interior.size() != n)) {
    throw InvalidArgument("dataset columns differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!positions[i].allFinite() || !accelerations[i].allFinite() ||
        (potentials && !std::isfinite((*potentials)[i]))) {
      throw InvalidArgument("dataset row " + std::to_string(i) + " is not finite");
    }
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.meta = meta;
  out.positions.reserve(indices.size());
  out.accelerations.reserve(indices.size());
  if (potentials) out.potentials.emplace();
  for (std::size_t i : indices) {
    out.positions.push_back(positions.at(i));
    out.accelerations.push_back(accelerations.at(i));
    if (potentials) out.potentials->push_back((*potentials)[i]);
    if (!interior.empty()) out.interior.push_back(interior[i]);
  }
  return out;
}

Dataset Dataset::exterior_only() const {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < size(); ++i) {
    if (interior.empty() || !interior[i]) keep.push_back(i);
  }
  return subset(keep);
}

Dataset label_points(const analytic::GravityModel& truth, const PointList& points,
                     const DatasetMeta& meta, bool with_potential) {
  Dataset d;
  d.meta = meta;
  d.positions = points;
  d.accelerations.reserve(points.size());
  if (with_potential) d.potentials.emplace();
  for (const auto& p : points) {
    const analytic::GravityEval g = truth.evaluate(p);
    d.accelerations.push_back(g.a);
    if (with_potential) d.potentials->push_back(g.U);
  }
  d.interior.assign(points.size(), false);
  return d;
}

Dataset label_points(const analytic::GravityModel& truth, const PointList& points,
                     const DatasetMeta& meta, const geometry::ShapeModel& shape,
                     bool with_potential) {
  Dataset d = label_points(truth, points, meta, with_potential);
  d.interior = geometry::interior_flags(shape, points);
  return d;
}

Dataset add_noise(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0)) throw InvalidArgument("noise fraction must be >= 0");
  Dataset out = data;
  out.meta.noise = fraction;
  if (fraction == 0.0) return out;
  std::mt19937_64 rng(seed);
  for (auto& a : out.accelerations) {
    a += fraction * a.norm() * geometry::random_direction(rng);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw InvalidArgument("validation fraction must be in [0, 1)");
  }
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * data.size()));
  std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  return {data.subset(train), data.subset(val)};
}

void write_dataset(const std::string& csv_path, const Dataset& data) {
  data.validate();
  std::ofstream os(csv_path);
  if (!os) throw IoError("cannot write '" + csv_path + "'");
  os << std::setprecision(17);
  os << "x,y,z,ax,ay,az" << (data.potentials ? ",U" : "") << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec3& p = data.positions[i];
    const Vec3& a = data.accelerations[i];
    os << p.x() << ',' << p.y() << ',' << p.z() << ',' << a.x() << ',' << a.y() << ',' << a.z();
    if (data.potentials) os << ',' << (*data.potentials)[i];
    os << '\n';
  }
  nlohmann::json meta;
  meta["seed"] = data.meta.seed;
  meta["r_min"] = data.meta.r_min;
  meta["r_max"] = data.meta.r_max;
  meta["noise"] = data.meta.noise;
  meta["truth"] = data.meta.truth;
  meta["source"] = data.meta.source;
  meta["R"] = data.meta.R;
  meta["mu"] = data.meta.mu;
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < data.interior.size(); ++i) {
    if (data.interior[i]) interior.push_back(i);
  }
  meta["interior_indices"] = interior;
  std::ofstream ms(csv_path + ".meta.json");
  if (!ms) throw IoError("cannot write '" + csv_path + ".meta.json'");
  ms << meta.dump(2) << '\n';
}

Dataset read_dataset(const std::string& csv_path) {
  std::ifstream is(csv_path);
  if (!is) throw IoError("cannot open dataset '" + csv_path + "'");
  std::string line;
  if (!std::getline(is, line)) throw IoError("dataset '" + csv_path + "' is empty");
  bool has_u = false;
  if (line == "x,y,z,ax,ay,az,U") {
    has_u = true;
  } else if (line != "x,y,z,ax,ay,az") {
    throw IoError("dataset header must be 'x,y,z,ax,ay,az[,U]'");
  }
  Dataset d;
  if (has_u) d.potentials.emplace();
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Vec3 p, a;
    double u = 0.0;
    if (!(ls >> p.x() >> p.y() >> p.z() >> a.x() >> a.y() >> a.z()) || (has_u && !(ls >> u))) {
      throw IoError(csv_path + ":" + std::to_string(line_no) + ": malformed row");
    }
    d.positions.push_back(p);
    d.accelerations.push_back(a);
    if (has_u) d.potentials->push_back(u);
  }
  d.interior.assign(d.size(), false);
  std::ifstream ms(csv_path + ".meta.json");
  if (ms) {
    try {
      nlohmann::json meta;
      ms >> meta;
      d.meta.seed = meta.value("seed", std::uint64_t{0});
      d.meta.r_min = meta.value("r_min", 0.0);
      d.meta.r_max = meta.value("r_max", 0.0);
      d.meta.noise = meta.value("noise", 0.0);
      d.meta.truth = meta.value("truth", std::string());
      d.meta.source = meta.value("source", std::string("shell"));
      d.meta.R = meta.value("R", 1.0);
      d.meta.mu = meta.value("mu", 0.0);
      for (std::size_t i : meta.value("interior_indices", std::vector<std::size_t>{})) {
        if (i < d.size()) d.interior[i] = true;
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed metadata for '" + csv_path + "': " + e.what());
    }
  }
  d.validate();
  return d;
}

}  // namespace pinngm::training
