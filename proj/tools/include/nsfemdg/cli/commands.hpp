#pragma once

#include <iosfwd>

#include "nsfemdg/cli/config.hpp"

namespace nsfemdg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Column order of the per-step diagnostics CSV.
inline constexpr const char* kDiagnosticsHeader =
    "step,t,mass,kinetic,internal,grad_diss,D2,D5,min_rho,energy_margin,positivity_slack,newton_iters,"
    "alpha_nodes_used";

/// Time integration with VTK output every `cadence` steps and a diagnostics
/// row per step. Returns 2 on a step failure or a violated energy or
/// positivity check.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Structural verification suite on the configured mesh (Jacobian probe on
/// n <= 2 only).
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// The configured refinement study; tables go to out and to output_dir.
int cmd_study(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point of the nsfemdg executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsfemdg::cli
