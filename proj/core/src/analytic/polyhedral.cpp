#include "pinngm/analytic/polyhedral.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"

namespace pinngm::analytic {

PolyhedralModel::PolyhedralModel(std::shared_ptr<const geometry::ShapeModel> shape, double mu)
    : shape_(std::move(shape)), mu_(mu) {
  if (!shape_) throw InvalidArgument("polyhedral model needs a shape");
  if (!(mu > 0.0)) throw InvalidArgument("polyhedral model needs mu > 0");
  g_sigma_ = mu / shape_->volume();
  precompute();
}

PolyhedralModel PolyhedralModel::from_density(std::shared_ptr<const geometry::ShapeModel> shape,
                                              double sigma) {
  if (!shape) throw InvalidArgument("polyhedral model needs a shape");
  if (!(sigma > 0.0)) throw InvalidArgument("polyhedral density must be positive");
  return PolyhedralModel(shape, kGravitationalConstant * sigma * shape->volume());
}

void PolyhedralModel::precompute() {
  const auto& v = shape_->vertices();
  const auto& normals = shape_->facet_normals();
  face_dyads_.resize(shape_->facet_count());
  for (std::size_t f = 0; f < face_dyads_.size(); ++f) {
    face_dyads_[f] = normals[f] * normals[f].transpose();
  }
  const auto& edges = shape_->edges();
  edge_dyads_.resize(edges.size());
  edge_lengths_.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const geometry::Edge& edge = edges[e];
    const Vec3 d = v[edge.v1] - v[edge.v0];
    edge_lengths_[e] = d.norm();
    // Edge normals lie in each facet's plane and point away from that facet.
    const Vec3& na = normals[edge.facet_a];
    const Vec3& nb = normals[edge.facet_b];
    const Vec3 ea = d.cross(na).normalized();
    const Vec3 eb = (-d).cross(nb).normalized();
    edge_dyads_[e] = na * ea.transpose() + nb * eb.transpose();
  }
}

GravityEval PolyhedralModel::evaluate(const Vec3& x) const {
  const auto& v = shape_->vertices();
  const auto& edges = shape_->edges();
  const double tol = 1e-12 * shape_->radius();

  double edge_u = 0.0;
  Vec3 edge_a = Vec3::Zero();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Vec3 r1 = v[edges[e].v0] - x;
    const Vec3 r2 = v[edges[e].v1] - x;
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    const double len = edge_lengths_[e];
    const double den = n1 + n2 - len;
    if (den <= tol) {
      throw SingularityError("field point lies on polyhedron edge " + std::to_string(e));
    }
    const double L = std::log((n1 + n2 + len) / den);
    const Vec3 Er = edge_dyads_[e] * r1;
    edge_u += r1.dot(Er) * L;
    edge_a += Er * L;
  }

  double face_u = 0.0;
  Vec3 face_a = Vec3::Zero();
  const auto& facets = shape_->facets();
  const auto& normals = shape_->facet_normals();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const Vec3 r1 = v[facets[f][0]] - x;
    const Vec3 r2 = v[facets[f][1]] - x;
    const Vec3 r3 = v[facets[f][2]] - x;
    const double l1 = r1.norm(), l2 = r2.norm(), l3 = r3.norm();
    const double num = r1.dot(r2.cross(r3));
    const double den = l1 * l2 * l3 + l1 * r2.dot(r3) + l2 * r3.dot(r1) + l3 * r1.dot(r2);
    if (std::abs(normals[f].dot(r1)) <= tol && den < 0.0) {
      // In the facet plane with a negative denominator means inside the triangle.
      throw SingularityError("field point lies on polyhedron facet " + std::to_string(f));
    }
    const double omega = 2.0 * std::atan2(num, den);
    const Vec3 Fr = face_dyads_[f] * r1;
    face_u += r1.dot(Fr) * omega;
    face_a += Fr * omega;
  }

  GravityEval out;
  out.U = 0.5 * g_sigma_ * (edge_u - face_u);
  out.a = -g_sigma_ * edge_a + g_sigma_ * face_a;
  return out;
}

double PolyhedralModel::laplacian(const Vec3& x) const {
  return -g_sigma_ * geometry::winding_solid_angle(*shape_, x);
}

std::size_t PolyhedralModel::parameter_count() const {
  return 3 * shape_->vertex_count() + 3 * shape_->facet_count();
}

}  // namespace pinngm::analytic
