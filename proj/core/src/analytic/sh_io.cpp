#include <fstream>
#include <iomanip>
#include <sstream>

#include "pinngm/analytic/spherical_harmonics.hpp"
#include "pinngm/common/error.hpp"

namespace pinngm::analytic {

void write_sh(std::ostream& os, const SphericalHarmonicModel& model) {
  os << std::setprecision(17);
  os << model.mu() << ' ' << model.radius() << ' ' << model.l_max() << '\n';
  for (int l = 0; l <= model.l_max(); ++l) {
    for (int m = 0; m <= l; ++m) {
      os << l << ' ' << m << ' ' << model.C(l, m) << ' ' << model.S(l, m) << '\n';
    }
  }
}

SphericalHarmonicModel read_sh(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("spherical harmonics file is empty");
  std::istringstream header(line);
  double mu = 0.0, R = 0.0;
  int l_max = -1;
  if (!(header >> mu >> R >> l_max) || l_max < 0 || !(R > 0.0)) {
    throw IoError("spherical harmonics header must read 'mu R l_max'");
  }
  SphericalHarmonicModel model(mu, R, l_max);
  model.set_C(0, 0, 0.0);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    int l = 0, m = 0;
    double c = 0.0, s = 0.0;
    if (!(ls >> l)) continue;
    if (!(ls >> m >> c >> s)) {
      throw IoError("line " + std::to_string(line_no) + ": expected 'l m C S'");
    }
    if (l > l_max || m < 0 || m > l) {
      throw IoError("line " + std::to_string(line_no) + ": (l, m) out of range");
    }
    model.set_C(l, m, c);
    if (m > 0) model.set_S(l, m, s);
  }
  return model;
}

void write_sh_file(const std::string& path, const SphericalHarmonicModel& model) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path + "'");
  write_sh(os, model);
}

SphericalHarmonicModel read_sh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_sh(is);
}

}  // namespace pinngm::analytic
