#pragma once

#include <algorithm>

#include "nsfemdg/common.hpp"

// Face kernels of the density/momentum transport. Sign convention: the face
// normal points from the minus side into the plus side, and a jump is
// [f] = f_plus - f_minus.
namespace nsfemdg::fluxes {

inline double positive_part(double x) { return std::max(x, 0.0); }
inline double negative_part(double x) { return std::min(x, 0.0); }

/// Upwind mass flux per unit area along the face normal.
inline double upwind_scalar(double rho_minus, double rho_plus, double flux) {
  return rho_minus * positive_part(flux) + rho_plus * negative_part(flux);
}

/// Momentum flux per unit area: carries the element-average velocity of the
/// upwind side.
inline Vec3 upwind_momentum(double up_value, const Vec3& uhat_minus, const Vec3& uhat_plus) {
  return positive_part(up_value) * uhat_minus + negative_part(up_value) * uhat_plus;
}

/// Face density-jump stabilization, h^{1-eps} |face| [rho]; pairs with [q].
inline double stab_continuity(double jump_rho, double h_power, double area) {
  return h_power * area * jump_rho;
}

/// Face momentum stabilization h^{1-eps} |face| [rho] ((u_- + u_+)/2) . [v].
inline double stab_momentum(double jump_rho, const Vec3& uhat_minus, const Vec3& uhat_plus,
                            const Vec3& jump_vhat, double h_power, double area) {
  return h_power * area * jump_rho * (0.5 * (uhat_minus + uhat_plus)).dot(jump_vhat);
}

}  // namespace nsfemdg::fluxes
