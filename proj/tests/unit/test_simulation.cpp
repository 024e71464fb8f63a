#include <gtest/gtest.h>

#include <cstdlib>

#include "nsfemdg/simulation.hpp"
#include "test_support.hpp"

namespace nsfemdg {
namespace {

TEST(StepCount, CeilWithIntegerTolerance) {
  EXPECT_EQ(step_count(0.0, 0.1), 0);
  EXPECT_EQ(step_count(1.0, 0.25), 4);
  EXPECT_EQ(step_count(1.1, 0.25), 5);
  EXPECT_EQ(step_count(0.3, 0.1), 3);  // 0.3 / 0.1 is 2.9999999999999996
  EXPECT_EQ(step_count(0.25, std::sqrt(3.0) / 4.0), 1);
  EXPECT_THROW(step_count(-1.0, 0.1), InvalidArgument);
  EXPECT_THROW(step_count(1.0, 0.0), InvalidArgument);
}

TEST(Run, ZeroFinalTime) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  const State s0 = testing::preset_state("bump", m, p);
  const RunResult r = run(s0, d, default_homotopy_settings(p), RunOptions{0.0, true});
  EXPECT_EQ(r.steps, 0);
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].rho.values, s0.rho.values);
  EXPECT_EQ(r.final_state.rho.values, s0.rho.values);
}

TEST(Run, StationaryStatesIdentical) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  const State s0 = testing::preset_state("stationary", m, p);
  const RunResult r = run(s0, d, default_homotopy_settings(p), RunOptions{10 * d.dt(), true});
  EXPECT_EQ(r.steps, 10);
  for (const State& s : r.states) {
    EXPECT_EQ(s.rho.values, s0.rho.values);
    EXPECT_EQ(testing::max_abs(s.u), 0.0);
  }
}

TEST(Run, BumpConservesMassAndStampsTime) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  const State s0 = testing::preset_state("bump", m, p);
  const double m0 = total_mass(s0, m);
  int calls = 0;
  const RunResult r = run(s0, d, default_homotopy_settings(p), RunOptions{4 * d.dt(), false},
                          [&](const State& prev, const State& cur, const SolveReport& rep) {
                            ++calls;
                            EXPECT_EQ(cur.step, prev.step + 1);
                            EXPECT_EQ(cur.time, cur.step * d.dt());
                            EXPECT_LE(rep.residual_norm, p.newton_tol);
                            EXPECT_NEAR(total_mass(cur, m), m0, 1e-12 * m0);
                          });
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(r.steps, 4);
  EXPECT_TRUE(r.states.empty());
  EXPECT_EQ(r.reports.size(), 4u);
  EXPECT_EQ(r.final_state.step, 4);
}

TEST(Run, FailureCarriesStepIndex) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  HomotopySettings s = default_homotopy_settings(p);
  s.schedules = {{0.0, 1.0}};
  s.max_iter_per_node = 1;
  // The rest state needs no Newton iterations; the failure happens once the
  // bump has to move.
  State s0 = testing::preset_state("bump", m, p);
  s0.step = 7;
  try {
    run(s0, d, s, RunOptions{3 * d.dt(), false});
    FAIL() << "expected StepFailure";
  } catch (const StepFailure& f) {
    EXPECT_EQ(f.step(), 8);
  }
}

TEST(TimeStep, RejectsMismatchedState) {
  const Mesh m1 = build_box_mesh(1);
  const Mesh m2 = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m2, p);
  EXPECT_THROW(time_step(testing::preset_state("stationary", m1, p), d, default_homotopy_settings(p)),
               InvalidArgument);
}

TEST(Run, DeterministicAcrossWorkerCounts) {
  const Mesh m = build_box_mesh(4);
  const SchemeParams p;
  const Discretization d(m, p);
  const State s0 = testing::preset_state("bump", m, p);
  auto once = [&](const char* threads) {
    setenv("NSFEMDG_THREADS", threads, 1);
    return run(s0, d, default_homotopy_settings(p), RunOptions{d.dt(), false}).final_state;
  };
  const State a = once("1");
  const State b = once("3");
  unsetenv("NSFEMDG_THREADS");
  EXPECT_EQ(a.rho.values, b.rho.values);
  EXPECT_EQ(a.u.dofs, b.u.dofs);
}

}  // namespace
}  // namespace nsfemdg
