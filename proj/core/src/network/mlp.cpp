#include "pinngm/network/mlp.hpp"

#include <cmath>
#include <random>

#include "pinngm/common/error.hpp"
#include "pinngm/network/jet.hpp"

namespace pinngm::network {
namespace {

struct Shape {
  int rows;
  int cols;
};

std::vector<Shape> layer_shapes(const MlpArch& a) {
  std::vector<Shape> s;
  if (a.wiring == Wiring::kGated) {
    for (int k = 0; k < 3; ++k) s.push_back({a.width, a.in_dim});
  } else {
    s.push_back({a.width, a.in_dim});
  }
  for (int k = 1; k < a.depth; ++k) s.push_back({a.width, a.width});
  s.push_back({a.out_dim, a.width});
  return s;
}

std::size_t layer_offset(const MlpArch& a, int index) {
  const auto shapes = layer_shapes(a);
  std::size_t off = 0;
  for (int k = 0; k < index; ++k) {
    off += static_cast<std::size_t>(shapes[k].rows) * (shapes[k].cols + 1);
  }
  return off;
}

void validate(const MlpArch& a) {
  if (a.depth < 1 || a.width < 1 || a.in_dim < 1 || a.out_dim < 1 || a.extra < 0) {
    throw InvalidArgument("network needs depth, width, in_dim, out_dim >= 1");
  }
}

void check_finite(const MatX& m, int layer_index) {
  if (!m.allFinite()) {
    throw NumericalError("non-finite activation in network layer " + std::to_string(layer_index));
  }
}

}  // namespace

std::string to_string(Wiring wiring) { return wiring == Wiring::kGated ? "gated" : "plain"; }

Wiring wiring_from_string(const std::string& name) {
  if (name == "gated") return Wiring::kGated;
  if (name == "plain") return Wiring::kPlain;
  throw InvalidArgument("unknown network wiring '" + name + "'");
}

std::size_t parameter_count(const MlpArch& arch) {
  validate(arch);
  std::size_t total = 0;
  for (const auto& s : layer_shapes(arch)) total += static_cast<std::size_t>(s.rows) * (s.cols + 1);
  return total + static_cast<std::size_t>(arch.extra);
}

int layer_count(const MlpArch& arch) { return static_cast<int>(layer_shapes(arch).size()); }

LayerView layer(const MlpParams& params, int index) {
  const auto shapes = layer_shapes(params.arch);
  const Shape s = shapes.at(static_cast<std::size_t>(index));
  const double* base = params.theta.data() + layer_offset(params.arch, index);
  return {Eigen::Map<const MatX>(base, s.rows, s.cols),
          Eigen::Map<const VecX>(base + s.rows * s.cols, s.rows)};
}

MutableLayerView layer(MlpArch arch, Eigen::Ref<VecX> flat, int index) {
  const auto shapes = layer_shapes(arch);
  const Shape s = shapes.at(static_cast<std::size_t>(index));
  double* base = flat.data() + layer_offset(arch, index);
  return {Eigen::Map<MatX>(base, s.rows, s.cols), Eigen::Map<VecX>(base + s.rows * s.cols, s.rows)};
}

MlpParams init_params(const MlpArch& arch, std::uint64_t seed) {
  MlpParams p;
  p.arch = arch;
  p.seed = seed;
  p.theta = VecX::Zero(static_cast<Eigen::Index>(parameter_count(arch)));
  std::mt19937_64 rng(seed);
  const auto shapes = layer_shapes(arch);
  for (int k = 0; k < static_cast<int>(shapes.size()); ++k) {
    const double limit = std::sqrt(6.0 / (shapes[k].rows + shapes[k].cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    auto view = layer(arch, p.theta, k);
    for (Eigen::Index c = 0; c < view.W.cols(); ++c) {
      for (Eigen::Index r = 0; r < view.W.rows(); ++r) view.W(r, c) = dist(rng);
    }
  }
  return p;
}

MlpParams init_params(int depth, int width, int feature_dim, std::uint64_t seed) {
  return init_params(MlpArch{Wiring::kGated, depth, width, feature_dim, 1, 2}, seed);
}

MatX forward_jets(const MlpParams& params, const MatX& X, int n, int order, JetCache* cache) {
  const MlpArch& a = params.arch;
  if (X.rows() != a.in_dim || X.cols() != static_cast<Eigen::Index>(jet_blocks(order)) * n) {
    throw InvalidArgument("network input has wrong shape");
  }
  const int L = layer_count(a);
  std::vector<MatX> Z(static_cast<std::size_t>(L - 1));
  std::vector<MatX> A(static_cast<std::size_t>(L - 1));
  std::vector<MatX> H;
  MatX D;
  MatX Y;

  auto dense = [&](int k, const MatX& in) {
    const LayerView v = layer(params, k);
    linear_jet(v.W, v.b, in, n, Z[k]);
    gelu_jet(Z[k], n, order, A[k]);
    check_finite(A[k], k);
  };

  if (a.wiring == Wiring::kGated) {
    for (int k = 0; k < 3; ++k) dense(k, X);
    D = A[2] - A[1];
    H.push_back(A[0]);
    for (int k = 3; k < L - 1; ++k) {
      dense(k, H.back());
      MatX P;
      mul_jet(A[k], D, n, order, P);
      H.push_back(A[1] + P);
      check_finite(H.back(), k);
    }
    const LayerView out = layer(params, L - 1);
    linear_jet(out.W, out.b, H.back(), n, Y);
  } else {
    dense(0, X);
    for (int k = 1; k < L - 1; ++k) dense(k, A[k - 1]);
    const LayerView out = layer(params, L - 1);
    linear_jet(out.W, out.b, A[L - 2], n, Y);
  }
  check_finite(Y, L - 1);

  if (cache != nullptr) {
    cache->n = n;
    cache->order = order;
    cache->X = X;
    cache->Z = std::move(Z);
    cache->A = std::move(A);
    cache->D = std::move(D);
    cache->H = std::move(H);
  }
  return Y;
}

void backward_jets(const MlpParams& params, const JetCache& cache, const MatX& Ybar,
                   Eigen::Ref<VecX> grad) {
  const MlpArch& a = params.arch;
  const int L = layer_count(a);
  const int n = cache.n;
  const int order = cache.order;

  auto dense_back = [&](int k, const MatX& in, const MatX& Abar, MatX* inbar) {
    MatX Zbar;
    gelu_jet_backward(cache.Z[k], Abar, n, order, Zbar);
    auto g = layer(a, grad, k);
    linear_jet_backward(layer(params, k).W, in, Zbar, n, g.W, g.b, inbar);
  };

  MatX Hbar;
  {
    auto g = layer(a, grad, L - 1);
    const MatX& last = a.wiring == Wiring::kGated ? cache.H.back() : cache.A[L - 2];
    linear_jet_backward(layer(params, L - 1).W, last, Ybar, n, g.W, g.b, &Hbar);
  }

  if (a.wiring == Wiring::kGated) {
    MatX Ubar = MatX::Zero(Hbar.rows(), Hbar.cols());
    MatX Dbar = MatX::Zero(Hbar.rows(), Hbar.cols());
    for (int k = L - 2; k >= 3; --k) {
      Ubar += Hbar;
      MatX Gbar = MatX::Zero(Hbar.rows(), Hbar.cols());
      mul_jet_backward(cache.A[k], cache.D, Hbar, n, order, Gbar, Dbar);
      MatX next;
      dense_back(k, cache.H[static_cast<std::size_t>(k - 3)], Gbar, &next);
      Hbar = std::move(next);
    }
    Ubar -= Dbar;
    dense_back(2, cache.X, Dbar, nullptr);
    dense_back(1, cache.X, Ubar, nullptr);
    dense_back(0, cache.X, Hbar, nullptr);
  } else {
    for (int k = L - 2; k >= 0; --k) {
      MatX next;
      dense_back(k, k == 0 ? cache.X : cache.A[k - 1], Hbar, k == 0 ? nullptr : &next);
      Hbar = std::move(next);
    }
  }
}

double forward(const MlpParams& params, const VecX& features) {
  const MatX X = features;
  return forward_jets(params, X, 1, 0)(0, 0);
}

GradComputation value_and_input_grad(const MlpParams& params, const VecX& features,
                                     const Eigen::Matrix<double, Eigen::Dynamic, 3>& jac,
                                     bool with_parameter_gradient) {
  if (jac.rows() != features.size()) throw InvalidArgument("feature Jacobian has wrong row count");
  MatX X(features.size(), 4);
  X.col(0) = features;
  X.rightCols(3) = jac;
  JetCache cache;
  const MatX Y = forward_jets(params, X, 1, 1, with_parameter_gradient ? &cache : nullptr);
  GradComputation out;
  out.value = Y(0, 0);
  out.input_gradient = Vec3(Y(0, 1), Y(0, 2), Y(0, 3));
  if (with_parameter_gradient) {
    out.parameter_gradient = VecX::Zero(params.theta.size());
    MatX Ybar = MatX::Zero(1, 4);
    Ybar(0, 0) = 1.0;
    backward_jets(params, cache, Ybar, out.parameter_gradient);
  }
  return out;
}

}  // namespace pinngm::network
