#include "pinngm/network/param_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "pinngm/common/error.hpp"

namespace pinngm::network {
namespace {

constexpr char kMagic[4] = {'P', 'G', 'M', 'P'};
constexpr std::int32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw IoError("truncated parameter file");
  }
  return value;
}

}  // namespace

void write_params(std::ostream& os, const MlpParams& params) {
  os.write(kMagic, 4);
  put<std::int32_t>(os, kVersion);
  put<std::int32_t>(os, params.arch.wiring == Wiring::kGated ? 0 : 1);
  put<std::int32_t>(os, params.arch.depth);
  put<std::int32_t>(os, params.arch.width);
  put<std::int32_t>(os, params.arch.in_dim);
  put<std::int32_t>(os, params.arch.out_dim);
  put<std::int32_t>(os, params.arch.extra);
  put<std::uint64_t>(os, params.seed);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(params.theta.size()));
  os.write(reinterpret_cast<const char*>(params.theta.data()),
           static_cast<std::streamsize>(sizeof(double) * params.theta.size()));
  if (!os) throw IoError("failed writing parameters");
}

MlpParams read_params(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not a parameter file (bad magic)");
  }
  if (get<std::int32_t>(is) != kVersion) throw IoError("unsupported parameter file version");
  MlpParams p;
  const auto wiring = get<std::int32_t>(is);
  if (wiring != 0 && wiring != 1) throw IoError("unknown wiring in parameter file");
  p.arch.wiring = wiring == 0 ? Wiring::kGated : Wiring::kPlain;
  p.arch.depth = get<std::int32_t>(is);
  p.arch.width = get<std::int32_t>(is);
  p.arch.in_dim = get<std::int32_t>(is);
  p.arch.out_dim = get<std::int32_t>(is);
  p.arch.extra = get<std::int32_t>(is);
  p.seed = get<std::uint64_t>(is);
  const auto count = get<std::uint64_t>(is);
  if (count != parameter_count(p.arch)) {
    throw IoError("parameter count does not match the stored architecture");
  }
  p.theta.resize(static_cast<Eigen::Index>(count));
  if (!is.read(reinterpret_cast<char*>(p.theta.data()),
               static_cast<std::streamsize>(sizeof(double) * count))) {
    throw IoError("truncated parameter file");
  }
  return p;
}

void write_params_file(const std::string& path, const MlpParams& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path + "'");
  write_params(os, params);
}

MlpParams read_params_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_params(is);
}

}  // namespace pinngm::network
