/**
 * @file mascon.hpp
 * @brief Superposition of interior point masses.
 */
#pragma once

#include <iosfwd>
#include <string>

#include "pinngm/analytic/gravity_model.hpp"

namespace pinngm::analytic {

class MasconModel final : public GravityModel {
 public:
  MasconModel() = default;
  MasconModel(PointList positions, std::vector<double> mus);

  GravityEval evaluate(const Vec3& x) const override;
  std::size_t parameter_count() const override { return 4 * positions_.size(); }
  std::string kind() const override { return "mascon"; }

  const PointList& positions() const noexcept { return positions_; }
  const std::vector<double>& mus() const noexcept { return mus_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double total_mu() const;

  void append(const Vec3& position, double mu);

 private:
  PointList positions_;
  std::vector<double> mus_;
};

/// CSV `x,y,z,mu` with header line.
void write_mascons(std::ostream& os, const MasconModel& model);
MasconModel read_mascons(std::istream& is);

}  // namespace pinngm::analytic
