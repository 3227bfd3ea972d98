#include "pinngm/analytic/spherical_harmonics.hpp"

#include <cmath>

#include "pinngm/common/error.hpp"
#include "pinngm/common/log.hpp"

namespace pinngm::analytic {
namespace {

double k_of(int m) { return m == 0 ? 1.0 : 2.0; }

struct TermGrad {
  double U;
  Vec3 a;
};

// Visits every (l, m) term of the expansion, passing the potential and
// gradient contributed by a unit normalized C_lm and a unit S_lm.
template <typename Fn>
void for_each_term(int L, double mu, double R, const Vec3& x, Fn&& fn) {
  const double r = x.norm();
  if (!(r > 0.0)) throw SingularityError("spherical harmonics evaluated at the origin");
  const double s = x.x() / r;
  const double t = x.y() / r;
  const double u = x.z() / r;
  const Vec3 rhat(s, t, u);

  // Derived Legendre functions A[l][m] for m <= l + 1 (the extra column is 0).
  const int W = L + 2;
  std::vector<double> A(static_cast<std::size_t>((L + 1) * W), 0.0);
  auto a = [&](int l, int m) -> double& { return A[static_cast<std::size_t>(l * W + m)]; };
  a(0, 0) = 1.0;
  for (int l = 1; l <= L; ++l) {
    a(l, l) = std::sqrt((2.0 * l + 1.0) * k_of(l) / (2.0 * l * k_of(l - 1))) * a(l - 1, l - 1);
    a(l, l - 1) = std::sqrt(2.0 * l * k_of(l - 1) / k_of(l)) * a(l, l) * u;
    for (int m = 0; m <= l - 2; ++m) {
      const double n1 = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) / ((l - m) * (l + m)));
      const double n2 = std::sqrt((l + m - 1.0) * (2.0 * l + 1.0) * (l - m - 1.0) /
                                  ((l + m) * (l - m) * (2.0 * l - 3.0)));
      a(l, m) = u * n1 * a(l - 1, m) - n2 * a(l - 2, m);
    }
  }

  std::vector<double> re(static_cast<std::size_t>(L + 1)), im(static_cast<std::size_t>(L + 1));
  re[0] = 1.0;
  im[0] = 0.0;
  for (int m = 1; m <= L; ++m) {
    re[m] = s * re[m - 1] - t * im[m - 1];
    im[m] = s * im[m - 1] + t * re[m - 1];
  }

  auto finish = [&](double U, double Fr, double Fs, double Ft, double Fu) {
    const double radial = Fr - (s * Fs + t * Ft + u * Fu) / r;
    return TermGrad{U, radial * rhat + Vec3(Fs, Ft, Fu) / r};
  };

  double rho = mu / r;
  const double ratio = R / r;
  for (int l = 0; l <= L; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double Alm = a(l, m);
      const double dA = m < l ? std::sqrt(k_of(m) / k_of(m + 1) * (l - m) * (l + m + 1.0)) * a(l, m + 1)
                              : 0.0;
      const double rm1 = m > 0 ? re[m - 1] : 0.0;
      const double im1 = m > 0 ? im[m - 1] : 0.0;
      const double Uc = rho * Alm * re[m];
      const TermGrad c = finish(Uc, -(l + 1.0) / r * Uc, rho * Alm * m * rm1, -rho * Alm * m * im1,
                                rho * dA * re[m]);
      if (m == 0) {
        fn(l, m, c, TermGrad{0.0, Vec3::Zero()});
      } else {
        const double Us = rho * Alm * im[m];
        const TermGrad sg = finish(Us, -(l + 1.0) / r * Us, rho * Alm * m * im1,
                                   rho * Alm * m * rm1, rho * dA * im[m]);
        fn(l, m, c, sg);
      }
    }
    rho *= ratio;
  }
}

}  // namespace

int sh_c_index(int l, int m) { return l * l + (m == 0 ? 0 : 2 * m - 1); }
int sh_s_index(int l, int m) {
  if (m == 0) throw InvalidArgument("S_l0 is identically zero and has no index");
  return l * l + 2 * m;
}

double sh_normalization(int l, int m) {
  // (l-m)!/(l+m)! accumulated as a product to stay in range.
  double ratio = 1.0;
  for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
  return std::sqrt(k_of(m) * (2.0 * l + 1.0) * ratio);
}

SphericalHarmonicModel::SphericalHarmonicModel(double mu, double R, int l_max)
    : mu_(mu), R_(R), l_max_(l_max), warned_inside_(std::make_shared<std::atomic<bool>>(false)) {
  if (l_max < 0) throw InvalidArgument("spherical harmonics degree must be >= 0");
  if (!(R > 0.0)) throw InvalidArgument("spherical harmonics reference radius must be positive");
  const std::size_t n = static_cast<std::size_t>((l_max + 1) * (l_max + 2) / 2);
  C_.assign(n, 0.0);
  S_.assign(n, 0.0);
  C_[0] = 1.0;
}

std::size_t SphericalHarmonicModel::tri(int l, int m) const {
  if (l < 0 || l > l_max_ || m < 0 || m > l) {
    throw InvalidArgument("coefficient (" + std::to_string(l) + "," + std::to_string(m) +
                          ") outside degree " + std::to_string(l_max_));
  }
  return static_cast<std::size_t>(l * (l + 1) / 2 + m);
}

double SphericalHarmonicModel::C(int l, int m) const { return C_[tri(l, m)]; }
double SphericalHarmonicModel::S(int l, int m) const { return S_[tri(l, m)]; }
void SphericalHarmonicModel::set_C(int l, int m, double value) { C_[tri(l, m)] = value; }
void SphericalHarmonicModel::set_S(int l, int m, double value) {
  if (m == 0 && value != 0.0) throw InvalidArgument("S_l0 must be zero");
  S_[tri(l, m)] = value;
}

std::size_t SphericalHarmonicModel::parameter_count() const {
  return static_cast<std::size_t>(sh_coefficient_count(l_max_));
}

VecX SphericalHarmonicModel::coefficients() const {
  VecX c(sh_coefficient_count(l_max_));
  for (int l = 0; l <= l_max_; ++l) {
    for (int m = 0; m <= l; ++m) {
      c[sh_c_index(l, m)] = C(l, m);
      if (m > 0) c[sh_s_index(l, m)] = S(l, m);
    }
  }
  return c;
}

void SphericalHarmonicModel::set_coefficients(const VecX& c) {
  if (c.size() != sh_coefficient_count(l_max_)) {
    throw InvalidArgument("coefficient vector has wrong length");
  }
  for (int l = 0; l <= l_max_; ++l) {
    for (int m = 0; m <= l; ++m) {
      set_C(l, m, c[sh_c_index(l, m)]);
      if (m > 0) set_S(l, m, c[sh_s_index(l, m)]);
    }
  }
}

GravityEval SphericalHarmonicModel::evaluate(const Vec3& x) const {
  if (x.norm() < R_ && !warned_inside_->exchange(true)) {
    log::warn("spherical harmonics evaluated inside the Brillouin sphere; the series may diverge");
  }
  GravityEval out;
  for_each_term(l_max_, mu_, R_, x, [&](int l, int m, const TermGrad& c, const TermGrad& s) {
    const double cl = C_[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
    const double sl = S_[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
    out.U += cl * c.U + sl * s.U;
    out.a += cl * c.a + sl * s.a;
  });
  return out;
}

ShBasis sh_basis(int l_max, double mu, double R, const Vec3& x) {
  const int n = sh_coefficient_count(l_max);
  ShBasis b;
  b.potential = Eigen::RowVectorXd::Zero(n);
  b.acceleration = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, n);
  for_each_term(l_max, mu, R, x, [&](int l, int m, const TermGrad& c, const TermGrad& s) {
    const int ic = sh_c_index(l, m);
    b.potential[ic] = c.U;
    b.acceleration.col(ic) = c.a;
    if (m > 0) {
      const int is = sh_s_index(l, m);
      b.potential[is] = s.U;
      b.acceleration.col(is) = s.a;
    }
  });
  return b;
}

SphericalHarmonicModel make_point_mass_j2(double mu, double R, double c20_unnormalized) {
  SphericalHarmonicModel model(mu, R, 2);
  model.set_C(2, 0, c20_unnormalized / sh_normalization(2, 0));
  return model;
}

}  // namespace pinngm::analytic
