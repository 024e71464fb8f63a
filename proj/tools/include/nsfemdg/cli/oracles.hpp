#pragma once

#include <Eigen/Core>

#include "nsfemdg/scheme.hpp"

// Brute-force re-implementations of the scheme residual used to cross-check
// the assembly. They rebuild geometry and adjacency from vertex coordinates
// and element vertex lists; the mesh face table is used only to look up the
// velocity dof of a face.
namespace nsfemdg::cli {

/// Continuity residual, one row per element, from an element stencil loop.
Eigen::VectorXd continuity_oracle(const State& prev, const State& guess, const Mesh& mesh,
                                  const SchemeParams& params, double alpha = 1.0);

/// Momentum residual, three rows per interior face in ascending face index,
/// by evaluating the weak form against each basis function over all
/// elements and faces.
Eigen::VectorXd momentum_oracle(const State& prev, const State& guess, const Mesh& mesh,
                                const SchemeParams& params, double alpha = 1.0);

}  // namespace nsfemdg::cli
