#pragma once

#include <functional>
#include <vector>

#include "nsfemdg/diagnostics.hpp"
#include "nsfemdg/simulation.hpp"

namespace nsfemdg {

/// Builds the discrete initial state on a given mesh.
using InitialData = std::function<State(const Mesh&, const SchemeParams&)>;

/// Sees every converged step of the runs a study performs.
using StudyObserver = std::function<void(const Discretization&, const State&, const State&, const SolveReport&)>;

struct RatesRow {
  int n = 0;
  double h = 0.0;
  double l2 = 0.0;
  double broken_h1 = 0.0;
  double l2_order = 0.0;  // log2 of the error ratio to the previous row; 0 on the first row
  double h1_order = 0.0;
};

struct RatesStudy {
  std::vector<RatesRow> rows;
  bool pass = false;  // every consecutive pair: L2 order in [1.8, 2.2], broken H1 in [0.8, 1.2]
};

/// Interpolation errors of Pi_V over successively doubled meshes.
RatesStudy rates_study(const SmoothVectorField& v, const std::vector<int>& ns, const Box& box, int quad_degree = 6);

struct CauchyRow {
  int n_coarse = 0;
  int n_fine = 0;
  double difference = 0.0;  // || rho_coarse - rho_fine ||_{L2((0,T) x Omega)}
};

struct CauchyStudy {
  std::vector<CauchyRow> rows;
  bool pass = false;  // strictly decreasing
};

/// Densities are extended piecewise constant in time, rho(t) = rho^k on
/// ((k-1) dt, k dt]; coarse fields are injected into the fine mesh through
/// the element parent map. Each n must divide the next.
CauchyStudy cauchy_study(const InitialData& initial, const SchemeParams& params, const Box& box,
                         const std::vector<int>& ns, double T, const StudyObserver& observer = {});

struct PDecayRow {
  int n = 0;
  double h = 0.0;
  PFunctionals magnitude;  // time integral over (0, T] of the integrated |P_i| densities
  PFunctionals order;      // log2 ratio to the previous row; 0 on the first row
};

struct PDecayStudy {
  std::vector<PDecayRow> rows;
  bool pass = false;  // every magnitude strictly decreasing
};

/// Fixed smooth test functions of the decay study, chosen without symmetry
/// with respect to the box.
SmoothScalarField pdecay_scalar_test();
SmoothVectorField pdecay_vector_test();

PDecayStudy p_decay_study(const InitialData& initial, const SchemeParams& params, const Box& box,
                          const std::vector<int>& ns, double T, const StudyObserver& observer = {});

}  // namespace nsfemdg
