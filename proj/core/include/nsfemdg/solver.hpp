#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "nsfemdg/scheme.hpp"

namespace nsfemdg {

/// Continuation over the homotopy parameter alpha, with Newton at each node.
struct HomotopySettings {
  // Schedules tried in order until one succeeds. Each starts at 0, ends at
  // exactly 1 and is strictly increasing.
  std::vector<std::vector<double>> schedules;
  int max_iter_per_node = 50;
  double tol = 1e-9;
  double backtrack = 0.5;
  double min_step = 1e-10;

  void validate() const;
};

/// {0, 1}, then {0, 0.25, 0.5, 0.75, 1}, then `homotopy_steps` uniform
/// steps.
HomotopySettings default_homotopy_settings(const SchemeParams& params);

/// Raised when a step cannot be solved; carries where continuation stopped.
class StepFailure : public SolverError {
 public:
  StepFailure(const std::string& what, double alpha, int iteration, double residual_norm, int step = -1)
      : SolverError(what), alpha_(alpha), iteration_(iteration), residual_norm_(residual_norm), step_(step) {}

  double alpha() const { return alpha_; }
  int iteration() const { return iteration_; }
  double residual_norm() const { return residual_norm_; }
  /// Index of the time level that could not be computed, -1 if unknown.
  int step() const { return step_; }

 private:
  double alpha_;
  int iteration_;
  double residual_norm_;
  int step_;
};

struct SolveReport {
  State state;
  int newton_iterations = 0;   // summed over all alpha nodes of the successful schedule
  int alpha_nodes = 0;         // size of the successful schedule
  int schedule_index = 0;      // which schedule succeeded
  double residual_norm = 0.0;  // final inf-norm at alpha = 1
};

ResidualVector alpha_residual(const State& prev, const State& guess, double alpha, const Discretization& disc);

/// Exact solution of the alpha = 0 system: rho = rho_prev and
/// (M / dt + K) u = M u_prev / dt with M the rho_prev-weighted
/// element-average mass and K the CR stiffness.
State alpha0_solve(const State& prev, const Discretization& disc);

/// Fill-reducing elimination order for a matrix whose unknown i sits at
/// `positions[i]`: recursive coordinate bisection with the graph separator
/// of each cut (in the symmetrized pattern) eliminated last. order[k] is the
/// unknown eliminated k-th.
std::vector<Index> nested_dissection_order(const Eigen::SparseMatrix<double>& a, const std::vector<Vec3>& positions);

/// Sparse LU solve. With `positions`, the system is reordered by
/// nested_dissection_order and factored with a relaxed diagonal pivot
/// threshold; otherwise COLAMD column ordering is used. Throws SolverError
/// if the factorization fails or the residual exceeds 1e-10 (1 + |b|_inf)
/// after one refinement sweep.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             const std::vector<Vec3>* positions = nullptr);

SolveReport homotopy_newton_solve(const State& prev, const Discretization& disc, const HomotopySettings& settings);

}  // namespace nsfemdg
