#include "pinngm/geometry/shape.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "pinngm/common/error.hpp"

namespace pinngm::geometry {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Second-moment tensor and first moment of the constant-density solid,
// accumulated over origin-apex tetrahedra.
struct MassMoments {
  double volume = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
};

MassMoments mass_moments(const std::vector<Vec3>& v, const std::vector<Facet>& facets) {
  MassMoments m;
  for (const auto& f : facets) {
    const Vec3& a = v[f[0]];
    const Vec3& b = v[f[1]];
    const Vec3& c = v[f[2]];
    const double vol = a.dot(b.cross(c)) / 6.0;
    const Vec3 s = a + b + c;
    m.volume += vol;
    m.first += vol * s / 4.0;
    m.second += vol / 20.0 * (a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose());
  }
  return m;
}

Mat3 principal_rotation(const Mat3& cov) {
  const double scale = cov.trace();
  const double off = std::abs(cov(0, 1)) + std::abs(cov(0, 2)) + std::abs(cov(1, 2));
  Mat3 q = Mat3::Zero();
  if (off <= 1e-12 * scale) {
    // Already axis aligned: only permute so extents are sorted, keeping ties in place.
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return cov(i, i) > cov(j, j) * (1.0 + 1e-12); });
    for (int k = 0; k < 3; ++k) q(order[k], k) = 1.0;
    if (q.determinant() < 0.0) q.col(2) = -q.col(2);
    return q;
  }
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  // Ascending eigenvalues: the largest spread becomes the x axis.
  for (int k = 0; k < 3; ++k) q.col(k) = solver.eigenvectors().col(2 - k);
  for (int k = 0; k < 2; ++k) {
    Eigen::Index idx = 0;
    q.col(k).cwiseAbs().maxCoeff(&idx);
    if (q(idx, k) < 0.0) q.col(k) = -q.col(k);
  }
  q.col(2) = q.col(0).cross(q.col(1));
  return q;
}

}  // namespace

double signed_volume(const std::vector<Vec3>& vertices, const std::vector<Facet>& facets) {
  double vol = 0.0;
  for (const auto& f : facets) {
    vol += vertices[f[0]].dot(vertices[f[1]].cross(vertices[f[2]])) / 6.0;
  }
  return vol;
}

ShapeModel ShapeModel::from_mesh(std::vector<Vec3> vertices, std::vector<Facet> facets,
                                 const LoadOptions& options) {
  if (vertices.empty() || facets.size() < 4) {
    throw GeometryError("mesh needs at least 4 facets to enclose a volume");
  }
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    for (int idx : facets[f]) {
      if (idx < 0 || idx >= nv) {
        throw GeometryError("facet " + std::to_string(f) + " references vertex index " +
                            std::to_string(idx + 1) + " outside 1.." + std::to_string(nv));
      }
    }
    if (facets[f][0] == facets[f][1] || facets[f][1] == facets[f][2] ||
        facets[f][0] == facets[f][2]) {
      throw GeometryError("facet " + std::to_string(f) + " repeats a vertex");
    }
  }

  // Each directed edge must occur once and be matched by its reverse.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const auto key = std::make_pair(facets[f][k], facets[f][(k + 1) % 3]);
      if (!directed.emplace(key, static_cast<int>(f)).second) {
        throw GeometryError("non-manifold or inconsistently wound edge (" +
                            std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                            ") shared by facets " + std::to_string(directed[key]) + " and " +
                            std::to_string(f));
      }
    }
  }
  for (const auto& [key, f] : directed) {
    if (directed.find({key.second, key.first}) == directed.end()) {
      throw GeometryError("open edge (" + std::to_string(key.first + 1) + "," +
                          std::to_string(key.second + 1) + ") bounds only facet " +
                          std::to_string(f));
    }
  }

  double vol = signed_volume(vertices, facets);
  if (std::abs(vol) <= std::numeric_limits<double>::min()) {
    throw GeometryError("mesh encloses zero volume");
  }
  if (vol < 0.0) {
    for (auto& f : facets) std::swap(f[1], f[2]);
  }

  if (options.recenter || options.principal_axes) {
    MassMoments m = mass_moments(vertices, facets);
    const Vec3 com = m.first / m.volume;
    if (options.recenter) {
      for (auto& v : vertices) v -= com;
    }
    if (options.principal_axes) {
      const MassMoments centered = mass_moments(vertices, facets);
      Vec3 c = centered.first / centered.volume;
      Mat3 cov = centered.second - centered.volume * c * c.transpose();
      const Mat3 q = principal_rotation(cov);
      for (auto& v : vertices) v = q.transpose() * v;
    }
  }

  ShapeModel shape;
  shape.vertices_ = std::move(vertices);
  shape.facets_ = std::move(facets);
  shape.build_caches();
  return shape;
}

void ShapeModel::build_caches() {
  normals_.resize(facets_.size());
  areas_.resize(facets_.size());
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    const Vec3& a = vertices_[facets_[f][0]];
    const Vec3& b = vertices_[facets_[f][1]];
    const Vec3& c = vertices_[facets_[f][2]];
    const Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    areas_[f] = 0.5 * len;
    normals_[f] = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
  }

  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      directed[{facets_[f][k], facets_[f][(k + 1) % 3]}] = static_cast<int>(f);
    }
  }
  edges_.clear();
  edges_.reserve(directed.size() / 2);
  for (const auto& [key, f] : directed) {
    if (key.first < key.second) {
      edges_.push_back(Edge{key.first, key.second, f, directed.at({key.second, key.first})});
    }
  }

  volume_ = signed_volume(vertices_, facets_);
  radius_ = 0.0;
  for (const auto& v : vertices_) radius_ = std::max(radius_, v.norm());
}

double ShapeModel::surface_area() const noexcept {
  double total = 0.0;
  for (double a : areas_) total += a;
  return total;
}

Vec3 ShapeModel::facet_centroid(std::size_t f) const {
  const auto& t = facets_.at(f);
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Vec3 ShapeModel::bbox_min() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  for (const auto& v : vertices_) lo = lo.cwiseMin(v);
  return lo;
}

Vec3 ShapeModel::bbox_max() const {
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const auto& v : vertices_) hi = hi.cwiseMax(v);
  return hi;
}

ShapeModel ShapeModel::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("shape scale factor must be positive");
  ShapeModel copy = *this;
  for (auto& v : copy.vertices_) v *= factor;
  copy.build_caches();
  return copy;
}

ShapeModel load_shape(std::istream& in, const LoadOptions& options) {
  std::vector<Vec3> vertices;
  std::vector<Facet> facets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) {
        throw GeometryError("line " + std::to_string(line_no) + ": malformed vertex record");
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const auto slash = tok.find('/');
        const std::string head = tok.substr(0, slash);
        try {
          std::size_t used = 0;
          const int value = std::stoi(head, &used);
          if (used != head.size()) throw std::invalid_argument(head);
          // Negative indices are relative to the current vertex count.
          idx.push_back(value < 0 ? static_cast<int>(vertices.size()) + value : value - 1);
        } catch (const std::exception&) {
          throw GeometryError("line " + std::to_string(line_no) + ": bad facet index '" + tok + "'");
        }
      }
      if (idx.size() != 3) {
        throw GeometryError("line " + std::to_string(line_no) + ": non-triangular facet with " +
                            std::to_string(idx.size()) + " vertices");
      }
      facets.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return ShapeModel::from_mesh(std::move(vertices), std::move(facets), options);
}

ShapeModel load_shape_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open shape file '" + path + "'");
  return load_shape(in, options);
}

void write_obj(std::ostream& os, const ShapeModel& shape) {
  os << std::setprecision(17);
  for (const auto& v : shape.vertices()) {
    os << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto& f : shape.facets()) {
    os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
}

void write_obj_file(const std::string& path, const ShapeModel& shape) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write shape file '" + path + "'");
  write_obj(os, shape);
}

BodyProperties body_properties(const ShapeModel& shape, double mu) {
  BodyProperties props;
  props.mu = mu;
  props.radius = shape.radius();
  const Vec3 half = 0.5 * (shape.bbox_max() - shape.bbox_min());
  std::array<double, 3> ext{half.x(), half.y(), half.z()};
  std::sort(ext.begin(), ext.end(), std::greater<>());
  props.semi_a = ext[0];
  props.semi_b = ext[1];
  props.semi_c = ext[2];
  props.eccentricity = std::sqrt(std::max(0.0, 1.0 - (ext[1] * ext[1]) / (ext[0] * ext[0])));
  return props;
}

double facet_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  const Vec3 r1 = a - p;
  const Vec3 r2 = b - p;
  const Vec3 r3 = c - p;
  const double l1 = r1.norm();
  const double l2 = r2.norm();
  const double l3 = r3.norm();
  const double num = r1.dot(r2.cross(r3));
  const double den = l1 * l2 * l3 + l1 * r2.dot(r3) + l2 * r3.dot(r1) + l3 * r1.dot(r2);
  return 2.0 * std::atan2(num, den);
}

double winding_solid_angle(const ShapeModel& shape, const Vec3& p) {
  const auto& v = shape.vertices();
  double total = 0.0;
  for (const auto& f : shape.facets()) {
    total += facet_solid_angle(v[f[0]], v[f[1]], v[f[2]], p);
  }
  return total;
}

bool contains(const ShapeModel& shape, const Vec3& p) {
  const auto& v = shape.vertices();
  const double tol = 1e-12 * shape.radius();
  for (std::size_t f = 0; f < shape.facet_count(); ++f) {
    const auto& t = shape.facets()[f];
    const Vec3& n = shape.facet_normals()[f];
    const double dist = n.dot(p - v[t[0]]);
    if (std::abs(dist) > tol) continue;
    // In-plane: barycentric test on the projected point.
    const Vec3 q = p - dist * n;
    const Vec3 e0 = v[t[1]] - v[t[0]];
    const Vec3 e1 = v[t[2]] - v[t[0]];
    const Vec3 w = q - v[t[0]];
    const double d00 = e0.dot(e0), d01 = e0.dot(e1), d11 = e1.dot(e1);
    const double d20 = w.dot(e0), d21 = w.dot(e1);
    const double den = d00 * d11 - d01 * d01;
    if (den <= 0.0) continue;
    const double beta = (d11 * d20 - d01 * d21) / den;
    const double gamma = (d00 * d21 - d01 * d20) / den;
    const double eps = 1e-12;
    if (beta >= -eps && gamma >= -eps && beta + gamma <= 1.0 + eps) {
      throw SingularityError("point lies on the surface of facet " + std::to_string(f));
    }
  }
  const double total = winding_solid_angle(shape, p);
  if (std::abs(total - kFourPi) < 1e-6) return true;
  if (std::abs(total) < 1e-6) return false;
  throw SingularityError("ambiguous winding number (total solid angle " + std::to_string(total) +
                         "); point is on or numerically at the surface");
}

}  // namespace pinngm::geometry
