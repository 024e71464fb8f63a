#pragma once

#include <random>
#include <string>
#include <vector>

#include "nsfemdg/scheme.hpp"

namespace nsfemdg::cli {

struct CheckOutcome {
  std::string name;
  double value = 0.0;      // measured quantity, compared against `threshold`
  double threshold = 0.0;
  bool pass = false;
};

/// max over `count` random quadratic fields of the three commuting-diagram
/// residuals; threshold 1e-12.
CheckOutcome check_commuting(const Mesh& mesh, std::mt19937_64& rng, int count = 10);

/// max over `count` random (u_h, quadratic v) pairs of
/// |int grad_h u_h : grad_h (Pi_V v - v)| / (|grad_h u_h| |grad v|); threshold 1e-10.
CheckOutcome check_orthogonality(const Mesh& mesh, std::mt19937_64& rng, int count = 10);

/// Largest relative residual of both transport identities at `s` for
/// constant, linear and quadratic random test functions; threshold 1e-10.
CheckOutcome check_transport(const State& s, const Discretization& disc, std::mt19937_64& rng);

/// Row-wise max |assembled - oracle| of the continuity (1e-13) and momentum
/// (1e-12) residual blocks.
std::vector<CheckOutcome> check_fv_oracle(const State& prev, const State& guess, const Discretization& disc);

/// max |J - J_fd| / max |J| with J_fd from central differences; 1e-5.
CheckOutcome check_jacobian(const State& prev, const State& guess, const Discretization& disc);

}  // namespace nsfemdg::cli
