#pragma once

#include <vector>

#include "nsfemdg/scheme.hpp"

namespace nsfemdg {

/// Energy bookkeeping of one step k-1 -> k. Every entry is nonnegative.
struct EnergyLedger {
  double kinetic = 0.0;    // sum |E| rho |uhat|^2 / 2
  double internal = 0.0;   // sum |E| p(rho) / (gamma - 1)
  double grad_diss = 0.0;  // sum |E| |grad_h u|_F^2
  double d2 = 0.0;         // sum |face| |Up| |[uhat]|^2 / 2, interior faces
  double d5 = 0.0;         // sum |E| rho_prev |uhat - uhat_prev|^2 / (2 dt)
  double mass = 0.0;
  double min_rho = 0.0;

  double energy() const { return kinetic + internal; }
  /// Dissipation rate entering the energy inequality.
  double dissipation() const { return grad_diss + d2 + d5; }
};

/// Ledger of `cur` relative to `prev` (the step that produced `cur`).
EnergyLedger energy_ledger(const State& prev, const State& cur, const Discretization& disc);

/// Ledger of a single state with all dissipation entries zero (time level 0).
EnergyLedger energy_ledger(const State& s, const Discretization& disc);

struct EnergyCheck {
  double e0 = 0.0;
  std::vector<double> margins;  // E^0 - (E^m + dt sum_{k<=m} dissipation^k), m = 1..
  bool pass = true;
};

/// `ledgers[0]` is the initial state; `ledgers[m]` belongs to step m.
EnergyCheck energy_inequality_check(const std::vector<EnergyLedger>& ledgers, double dt);

/// Incremental form for streaming: feed ledgers in step order.
class EnergyTracker {
 public:
  EnergyTracker(const EnergyLedger& initial, double dt) : e0_(initial.energy()), dt_(dt) {}
  /// Returns the margin after step m.
  double add(const EnergyLedger& step);
  double e0() const { return e0_; }
  bool pass() const { return pass_; }

 private:
  double e0_;
  double dt_;
  double accumulated_ = 0.0;
  bool pass_ = true;
};

struct PositivityCheck {
  double bound = 0.0;  // min rho_prev / (1 + dt max |div_h u|)
  double slack = 0.0;  // min rho - bound
  bool pass = true;    // slack >= -1e-12
};

PositivityCheck positivity_bound_check(const State& prev, const State& cur, const Discretization& disc);

struct RenormalizedCheck {
  double lhs = 0.0;  // sum |E| (rho^2 - rho_prev^2) / (2 dt)
  double rhs = 0.0;  // -sum |E| rho^2 / 2 div_h u
  double margin = 0.0;
  bool pass = true;  // margin >= -1e-10 (1 + |rhs|)
};

RenormalizedCheck renormalized_check(const State& prev, const State& cur, const Discretization& disc);

/// Error functionals of the discrete transport operators. Signed values.
struct PFunctionals {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
};

struct TransportIdentity {
  double lhs = 0.0;
  double rhs = 0.0;  // volume term plus the error functionals
  double volume = 0.0;
  PFunctionals p;
  double relative_residual = 0.0;  // |lhs - rhs| / (1 + |lhs|)
  bool pass = true;                // relative_residual <= 1e-10
};

/// sum_faces |face| Up [Pi_Q phi]  versus  int rho u~ . grad phi + P1(phi),
/// with u~ the face-flux reconstruction of u. Requires rho > 0.
TransportIdentity transport_identity_continuity(const State& s, const SmoothScalarField& phi,
                                                const Discretization& disc, int quad_degree = 4);

/// sum_faces |face| F . [w]  versus  int rho (u~ . grad v) . uhat + P2 + P3 + P4,
/// where w is the element mean of Pi_V v and F the upwind momentum flux.
TransportIdentity transport_identity_momentum(const State& s, const SmoothVectorField& v,
                                              const Discretization& disc, int quad_degree = 4);

/// Integrals of the absolute values of the P-functional densities.
PFunctionals p_functional_magnitudes(const State& s, const SmoothScalarField& phi, const SmoothVectorField& v,
                                     const Discretization& disc, int quad_degree = 6);

}  // namespace nsfemdg
