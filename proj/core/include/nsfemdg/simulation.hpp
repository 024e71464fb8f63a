#pragma once

#include <functional>
#include <vector>

#include "nsfemdg/scheme.hpp"
#include "nsfemdg/solver.hpp"

namespace nsfemdg {

/// One implicit step k-1 -> k. Throws StepFailure.
SolveReport time_step(const State& prev, const Discretization& disc, const HomotopySettings& settings);

/// Number of steps needed to reach T with the mesh step dt: ceil(T / dt),
/// with T / dt within 1e-9 of an integer counted as that integer.
int step_count(double T, double dt);

struct RunOptions {
  double T = 0.0;
  bool keep_states = true;
};

/// Called after each converged step with (previous state, new state, solver
/// report).
using StepObserver = std::function<void(const State&, const State&, const SolveReport&)>;

struct RunResult {
  std::vector<State> states;  // initial state first; empty unless keep_states
  std::vector<SolveReport> reports;  // solver reports without the state copies
  State final_state;
  int steps = 0;
};

/// Runs step_count(T, dt) steps from `initial`. A failing step is rethrown as
/// StepFailure carrying its step index.
RunResult run(const State& initial, const Discretization& disc, const HomotopySettings& settings,
              const RunOptions& options, const StepObserver& observer = {});

}  // namespace nsfemdg
