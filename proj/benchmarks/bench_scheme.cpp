#include <benchmark/benchmark.h>

#include <cmath>

#include "nsfemdg/diagnostics.hpp"
#include "nsfemdg/simulation.hpp"

namespace {

using namespace nsfemdg;

State bump(const Mesh& m, const SchemeParams& p) {
  const Vec3 c = 0.5 * (m.box().lower + m.box().upper);
  return initial_state([c](const Vec3& x) { return 1.0 + 0.5 * std::exp(-(x - c).squaredNorm() / 0.04); },
                       [](const Vec3&) { return Vec3::Zero(); }, m, p);
}

// A state with flow, so every upwind branch is exercised.
State moving(const Mesh& m, const SchemeParams& p) {
  State s = bump(m, p);
  s.u = interpolate_V([](const Vec3& x) { return Vec3(std::sin(3.0 * x[1]), x[0] * x[2], -x[1]); }, m);
  apply_no_slip(s.u, m);
  return s;
}

void BM_BuildMesh(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_box_mesh(n));
  st.counters["elements"] = 6.0 * n * n * n;
}
BENCHMARK(BM_BuildMesh)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Residual(benchmark::State& st) {
  const Mesh m = build_box_mesh(static_cast<int>(st.range(0)));
  const SchemeParams p;
  const Discretization d(m, p);
  const State prev = bump(m, p);
  const Eigen::VectorXd x = d.pack(moving(m, p));
  for (auto _ : st) benchmark::DoNotOptimize(residual(prev, x, d).values.data());
  st.counters["unknowns"] = static_cast<double>(d.num_unknowns());
}
BENCHMARK(BM_Residual)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& st) {
  const Mesh m = build_box_mesh(static_cast<int>(st.range(0)));
  const SchemeParams p;
  const Discretization d(m, p);
  const State prev = bump(m, p);
  const Eigen::VectorXd x = d.pack(moving(m, p));
  for (auto _ : st) benchmark::DoNotOptimize(jacobian(prev, x, d).nonZeros());
}
BENCHMARK(BM_Jacobian)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LinearSolve(benchmark::State& st) {
  const Mesh m = build_box_mesh(static_cast<int>(st.range(0)));
  const SchemeParams p;
  const Discretization d(m, p);
  const State prev = bump(m, p);
  const Eigen::VectorXd x = d.pack(moving(m, p));
  const Eigen::SparseMatrix<double> j = jacobian(prev, x, d);
  const Eigen::VectorXd b = residual(prev, x, d).values;
  const bool geometric = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(linear_solve(j, b, geometric ? &d.unknown_positions() : nullptr).data());
}
BENCHMARK(BM_LinearSolve)
    ->Args({4, 1})
    ->Args({4, 0})
    ->Args({8, 1})
    ->ArgNames({"n", "nested_dissection"})
    ->Unit(benchmark::kMillisecond);

void BM_TimeStep(benchmark::State& st) {
  const Mesh m = build_box_mesh(static_cast<int>(st.range(0)));
  const SchemeParams p;
  const Discretization d(m, p);
  const State s0 = bump(m, p);
  const HomotopySettings h = default_homotopy_settings(p);
  for (auto _ : st) benchmark::DoNotOptimize(time_step(s0, d, h).newton_iterations);
}
BENCHMARK(BM_TimeStep)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnergyLedger(benchmark::State& st) {
  const Mesh m = build_box_mesh(static_cast<int>(st.range(0)));
  const SchemeParams p;
  const Discretization d(m, p);
  const State a = bump(m, p);
  const State b = moving(m, p);
  for (auto _ : st) benchmark::DoNotOptimize(energy_ledger(a, b, d).energy());
}
BENCHMARK(BM_EnergyLedger)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
