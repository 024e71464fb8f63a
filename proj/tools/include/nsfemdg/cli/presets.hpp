#pragma once

#include "nsfemdg/cli/config.hpp"
#include "nsfemdg/studies.hpp"

namespace nsfemdg::cli {

/// Initial data of the configured preset.
///
/// stationary: the rest state rho = rho_bar, u = 0, taken as the discrete
///   state directly (rho_bar > 0, so no density floor is needed).
/// bump: rho0 = rho_bar + amplitude exp(-r^2 / sigma^2) about the box centre,
///   m0 = 0.
/// shear: rho0 = rho_bar, m0 = (amplitude sin(2 pi y), 0, 0) rho0.
/// bump and shear go through initial_state, which adds the kappa h floor.
InitialData make_initial_data(const RunConfig& cfg);

}  // namespace nsfemdg::cli
