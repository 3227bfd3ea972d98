/**
 * @file bundles.hpp
 * @brief Model bundles on disk: a directory with a model.json whose "kind"
 * selects the loader.
 */
#pragma once

#include <memory>
#include <string>

#include "pinngm/analytic/mascon.hpp"
#include "pinngm/analytic/polyhedral.hpp"
#include "pinngm/analytic/spherical_harmonics.hpp"

namespace pinngm::eval {

std::string bundle_kind(const std::string& dir);

/// Loads any bundle written by the toolkit (pinn, tnn, sh, mascon, elm,
/// polyhedral, point_mass).
std::shared_ptr<analytic::GravityModel> load_any_bundle(const std::string& dir);

void save_sh_bundle(const std::string& dir, const analytic::SphericalHarmonicModel& model);
void save_mascon_bundle(const std::string& dir, const analytic::MasconModel& model, double mu,
                        double R);
void save_polyhedral_bundle(const std::string& dir, const analytic::PolyhedralModel& model);
void save_point_mass_bundle(const std::string& dir, double mu);

/// Parameter count written in model.json.
std::size_t bundle_params(const std::string& dir);

}  // namespace pinngm::eval
