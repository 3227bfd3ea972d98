/**
 * @file dataset.hpp
 * @brief Position/acceleration(/potential) samples with provenance.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pinngm/analytic/gravity_model.hpp"
#include "pinngm/common/types.hpp"
#include "pinngm/geometry/shape.hpp"

namespace pinngm::training {

struct DatasetMeta {
  std::uint64_t seed = 0;
  double r_min = 0.0;  // altitude band in units of R
  double r_max = 0.0;
  double noise = 0.0;
  std::string truth;
  std::string source = "shell";
  double R = 1.0;
  double mu = 0.0;
};

struct Dataset {
  PointList positions;
  std::vector<Vec3> accelerations;
  std::optional<std::vector<double>> potentials;
  /// Samples that lie inside the body; kept but flagged.
  std::vector<bool> interior;
  DatasetMeta meta;

  std::size_t size() const noexcept { return positions.size(); }
  /// Throws InvalidArgument on ragged lists or non-finite entries.
  void validate() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
  /// Copy without the interior-flagged samples.
  Dataset exterior_only() const;
};

/// Labels the points with the truth model. Interior flags default to false.
Dataset label_points(const analytic::GravityModel& truth, const PointList& points,
                     const DatasetMeta& meta, bool with_potential = true);

/// As above, and flags the points lying inside `shape`.
Dataset label_points(const analytic::GravityModel& truth, const PointList& points,
                     const DatasetMeta& meta, const geometry::ShapeModel& shape,
                     bool with_potential = true);

/// a_i + fraction |a_i| u_i with u_i uniform on the sphere.
Dataset add_noise(const Dataset& data, double fraction, std::uint64_t seed);

/// Seeded shuffle into (train, validation) with round(val_fraction * n)
/// validation samples.
std::pair<Dataset, Dataset> split(const Dataset& data, double val_fraction, std::uint64_t seed);

/// CSV `x,y,z,ax,ay,az[,U]` in SI units plus `<path>.meta.json`.
void write_dataset(const std::string& csv_path, const Dataset& data);
Dataset read_dataset(const std::string& csv_path);

}  // namespace pinngm::training
