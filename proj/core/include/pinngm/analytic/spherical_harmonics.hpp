/**
 * @file spherical_harmonics.hpp
 * @brief Exterior spherical-harmonic gravity field in the non-singular Pines
 * formulation with fully normalized coefficients.
 */
#pragma once

#include <atomic>
#include <iosfwd>
#include <memory>
#include <string>

#include "pinngm/analytic/gravity_model.hpp"

namespace pinngm::analytic {

/// Index of C_lm / S_lm in the flattened coefficient vector used by the
/// regression basis: degree-major, C before S, S_l0 omitted. The vector has
/// (l_max + 1)^2 entries.
int sh_c_index(int l, int m);
int sh_s_index(int l, int m);
inline int sh_coefficient_count(int l_max) { return (l_max + 1) * (l_max + 1); }

/// Ratio between unnormalized and fully normalized coefficients:
/// C_lm = N_lm * Cbar_lm with N_lm = sqrt((2 - delta_m0)(2l+1)(l-m)!/(l+m)!).
double sh_normalization(int l, int m);

class SphericalHarmonicModel final : public GravityModel {
 public:
  /// All coefficients zero except Cbar_00 = 1.
  SphericalHarmonicModel(double mu, double R, int l_max);

  GravityEval evaluate(const Vec3& x) const override;
  std::size_t parameter_count() const override;
  std::string kind() const override { return "spherical_harmonics"; }

  double mu() const noexcept { return mu_; }
  double radius() const noexcept { return R_; }
  int l_max() const noexcept { return l_max_; }

  /// Fully normalized coefficients.
  double C(int l, int m) const;
  double S(int l, int m) const;
  void set_C(int l, int m, double value);
  void set_S(int l, int m, double value);

  /// Flattened normalized coefficients in sh_c_index/sh_s_index order.
  VecX coefficients() const;
  void set_coefficients(const VecX& c);

 private:
  std::size_t tri(int l, int m) const;

  double mu_;
  double R_;
  int l_max_;
  std::vector<double> C_;
  std::vector<double> S_;
  std::shared_ptr<std::atomic<bool>> warned_inside_;
};

/// Potential row (1 x n) and acceleration rows (3 x n) of the field with
/// respect to every normalized coefficient, n = (l_max+1)^2. The model's
/// evaluate() is the contraction of this basis with its coefficient vector.
struct ShBasis {
  Eigen::RowVectorXd potential;
  Eigen::Matrix<double, 3, Eigen::Dynamic> acceleration;
};
ShBasis sh_basis(int l_max, double mu, double R, const Vec3& x);

/// Point mass plus an unnormalized zonal C20 (= -J2) term.
SphericalHarmonicModel make_point_mass_j2(double mu, double R, double c20_unnormalized);

/// Text format: header `mu R l_max`, then one `l m C S` line per (l, m) with
/// fully normalized coefficients.
void write_sh(std::ostream& os, const SphericalHarmonicModel& model);
SphericalHarmonicModel read_sh(std::istream& is);
void write_sh_file(const std::string& path, const SphericalHarmonicModel& model);
SphericalHarmonicModel read_sh_file(const std::string& path);

}  // namespace pinngm::analytic
