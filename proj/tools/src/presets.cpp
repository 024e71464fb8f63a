#include "nsfemdg/cli/presets.hpp"

#include <cmath>

namespace nsfemdg::cli {

InitialData make_initial_data(const RunConfig& cfg) {
  const double rho_bar = cfg.rho_bar;
  const double amp = cfg.amplitude;
  if (cfg.preset == "stationary") {
    return [rho_bar](const Mesh& mesh, const SchemeParams&) {
      State s;
      s.rho.values = Eigen::VectorXd::Constant(mesh.num_elements(), rho_bar);
      s.u = zero_cr_field(mesh);
      return s;
    };
  }
  if (cfg.preset == "bump") {
    const Vec3 centre = 0.5 * (cfg.box.lower + cfg.box.upper);
    const double s2 = cfg.sigma * cfg.sigma;
    return [=](const Mesh& mesh, const SchemeParams& params) {
      auto rho0 = [=](const Vec3& x) { return rho_bar + amp * std::exp(-(x - centre).squaredNorm() / s2); };
      return initial_state(rho0, [](const Vec3&) { return Vec3(Vec3::Zero()); }, mesh, params);
    };
  }
  if (cfg.preset == "shear") {
    const double two_pi = 2.0 * std::acos(-1.0);
    return [=](const Mesh& mesh, const SchemeParams& params) {
      auto rho0 = [=](const Vec3&) { return rho_bar; };
      auto m0 = [=](const Vec3& x) { return Vec3(amp * std::sin(two_pi * x[1]) * rho_bar, 0.0, 0.0); };
      return initial_state(rho0, m0, mesh, params);
    };
  }
  throw ConfigError("unknown preset '" + cfg.preset + "'");
}

}  // namespace nsfemdg::cli
