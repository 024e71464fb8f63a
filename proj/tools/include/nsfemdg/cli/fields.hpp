#pragma once

#include <random>

#include "nsfemdg/scheme.hpp"

namespace nsfemdg::cli {

/// c + b.x + x^T A x with random coefficients in [-1, 1]; degree <= `degree`.
SmoothScalarField random_polynomial(std::mt19937_64& rng, int degree);

/// Each component an independent random_polynomial.
SmoothVectorField random_polynomial_field(std::mt19937_64& rng, int degree);

/// rho in [0.5, 1.5] per element, velocity dofs in [-1, 1] with no-slip.
State random_state(const Mesh& mesh, std::mt19937_64& rng);

/// Moves every interior normal flux of `s` at least `min_flux` away from zero.
void separate_fluxes(State& s, const Mesh& mesh, double min_flux);

}  // namespace nsfemdg::cli
