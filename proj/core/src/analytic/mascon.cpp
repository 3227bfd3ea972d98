#include "pinngm/analytic/mascon.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pinngm/analytic/point_mass.hpp"
#include "pinngm/common/error.hpp"

namespace pinngm::analytic {

MasconModel::MasconModel(PointList positions, std::vector<double> mus)
    : positions_(std::move(positions)), mus_(std::move(mus)) {
  if (positions_.size() != mus_.size()) {
    throw InvalidArgument("mascon positions and mus differ in length");
  }
}

GravityEval MasconModel::evaluate(const Vec3& x) const {
  GravityEval out;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Vec3 d = x - positions_[i];
    const double r = d.norm();
    if (!(r > 0.0)) throw SingularityError("field point coincides with mascon " + std::to_string(i));
    out.U += mus_[i] / r;
    out.a -= mus_[i] / (r * r * r) * d;
  }
  return out;
}

double MasconModel::total_mu() const {
  double total = 0.0;
  for (double m : mus_) total += m;
  return total;
}

void MasconModel::append(const Vec3& position, double mu) {
  positions_.push_back(position);
  mus_.push_back(mu);
}

void write_mascons(std::ostream& os, const MasconModel& model) {
  os << std::setprecision(17) << "x,y,z,mu\n";
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Vec3& p = model.positions()[i];
    os << p.x() << ',' << p.y() << ',' << p.z() << ',' << model.mus()[i] << '\n';
  }
}

MasconModel read_mascons(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,z,mu", 0) != 0) {
    throw IoError("mascon file must start with header 'x,y,z,mu'");
  }
  MasconModel model;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Vec3 p;
    double mu = 0.0;
    if (!(ls >> p.x() >> p.y() >> p.z() >> mu)) {
      throw IoError("line " + std::to_string(line_no) + ": expected x,y,z,mu");
    }
    model.append(p, mu);
  }
  return model;
}

}  // namespace pinngm::analytic
