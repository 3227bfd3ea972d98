/**
 * @file param_io.hpp
 * @brief Binary serialization of network parameters.
 *
 * Layout (little-endian): magic "PGMP", int32 version, int32 wiring, depth,
 * width, in_dim, out_dim, extra, uint64 seed, uint64 count, count doubles.
 */
#pragma once

#include <iosfwd>
#include <string>

#include "pinngm/network/mlp.hpp"

namespace pinngm::network {

void write_params(std::ostream& os, const MlpParams& params);
MlpParams read_params(std::istream& is);
void write_params_file(const std::string& path, const MlpParams& params);
MlpParams read_params_file(const std::string& path);

}  // namespace pinngm::network
