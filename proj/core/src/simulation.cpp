#include "nsfemdg/simulation.hpp"

#include <cmath>

namespace nsfemdg {

SolveReport time_step(const State& prev, const Discretization& disc, const HomotopySettings& settings) {
  if (prev.rho.size() != disc.mesh().num_elements() || prev.u.size() != disc.mesh().num_faces()) {
    throw InvalidArgument("time_step: state does not match the mesh");
  }
  return homotopy_newton_solve(prev, disc, settings);
}

int step_count(double T, double dt) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("final time must be finite and >= 0");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

RunResult run(const State& initial, const Discretization& disc, const HomotopySettings& settings,
              const RunOptions& options, const StepObserver& observer) {
  const int m = step_count(options.T, disc.dt());
  RunResult result;
  if (options.keep_states) result.states.push_back(initial);
  State cur = initial;
  for (int k = 1; k <= m; ++k) {
    SolveReport rep;
    try {
      rep = time_step(cur, disc, settings);
    } catch (const StepFailure& f) {
      throw StepFailure(f.what(), f.alpha(), f.iteration(), f.residual_norm(), cur.step + 1);
    }
    rep.state.time = initial.time + k * disc.dt();
    if (observer) observer(cur, rep.state, rep);
    cur = std::move(rep.state);
    rep.state = State{};
    if (options.keep_states) result.states.push_back(cur);
    result.reports.push_back(std::move(rep));
    ++result.steps;
  }
  result.final_state = std::move(cur);
  return result;
}

}  // namespace nsfemdg
