#include "pinngm/pinn/factory.hpp"

#include <algorithm>

#include "pinngm/common/error.hpp"

namespace pinngm::pinn {

PinnSpec pinn_preset(const std::string& size) {
  PinnSpec s;
  if (size == "small") {
    s.depth = 2;
    s.width = 8;
  } else if (size == "large") {
    s.depth = 8;
    s.width = 64;
  } else if (size != "medium") {
    throw ConfigError("unknown model size '" + size + "' (small, medium, large)");
  }
  return s;
}

PinnModel make_pinn(const PinnSpec& spec, const PointList& positions,
                    const std::optional<std::vector<double>>& potentials, double mu, double R) {
  if (!(mu > 0.0) || !(R > 0.0)) throw InvalidArgument("make_pinn needs mu > 0 and R > 0");
  FusionConfig fusion;
  fusion.enabled = spec.fusion;
  fusion.k_star = spec.k_star;
  fusion.R_star = spec.R_star;
  fusion.lf = {mu, R, spec.c20};
  NonDimConstants c =
      compute_constants(positions, potentials, R, spec.fusion ? &fusion.lf : nullptr, mu);
  if (spec.pipeline.features == FeatureKind::kCartesian3) {
    if (spec.pipeline.proxy || spec.boundary.enabled || spec.fusion) {
      throw ConfigError("cartesian features are only supported without proxy, boundary and fusion");
    }
    double r_max = 0.0;
    for (const auto& p : positions) r_max = std::max(r_max, p.norm());
    if (r_max > 0.0) c = NonDimConstants::from(r_max, c.U_star);
  }
  const network::MlpArch arch{network::Wiring::kGated, spec.depth, spec.width,
                              feature_dim(spec.pipeline.features), 1, 2};
  return PinnModel(network::init_params(arch, spec.seed), c, spec.boundary, fusion, spec.pipeline);
}

}  // namespace pinngm::pinn
