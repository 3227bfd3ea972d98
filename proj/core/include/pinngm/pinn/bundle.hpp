/**
 * @file bundle.hpp
 * @brief On-disk model bundles: a directory holding `model.json` and, for
 * network models, a binary parameter file.
 */
#pragma once

#include <string>

#include "pinngm/pinn/pinn_model.hpp"

namespace pinngm::pinn {

/// Writes `<dir>/model.json` and `<dir>/params.bin`; creates dir if needed.
void save_pinn_bundle(const std::string& dir, const PinnModel& model);
PinnModel load_pinn_bundle(const std::string& dir);

}  // namespace pinngm::pinn
