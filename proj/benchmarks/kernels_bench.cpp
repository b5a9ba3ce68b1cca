#include <benchmark/benchmark.h>

#include <random>

#include "app/commands.hpp"
#include "pslforge/assembly.hpp"
#include "pslforge/bound.hpp"
#include "pslforge/metrics.hpp"
#include "pslforge/numkern.hpp"

using namespace pslforge;

namespace {

Sequence random_sequence(int n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (auto& p : phases) p = phase(rng);
  return sequence_from_phases(phases);
}

DesignConfig case1() { return app::resolve_config({.preset = "case1"}).design; }

void BM_Autocorrelation(benchmark::State& state) {
  const Sequence x = random_sequence(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Autocorrelation)->RangeMultiplier(4)->Range(32, 4096)->Complexity();

void BM_ProjectPsd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(n, n);
  const HermitianMatrix h = HermitianMatrix::hermitian_part(m);
  for (auto _ : state) benchmark::DoNotOptimize(project_psd(h));
}
BENCHMARK(BM_ProjectPsd)->Arg(32)->Arg(64)->Arg(128);

void BM_Subproblem1(benchmark::State& state) {
  const DesignConfig cfg = case1();
  const ConstraintAtoms atoms = build_atoms(cfg);
  const HermitianMatrix x2 = HermitianMatrix::outer(random_sequence(cfg.n).values());
  for (auto _ : state) {
    const auto sub = assemble_subproblem_1(x2, cfg, atoms);
    benchmark::DoNotOptimize(conic::solve(sub.program, cfg.solver));
  }
  state.SetLabel("case1");
}
BENCHMARK(BM_Subproblem1)->Unit(benchmark::kMillisecond);

void BM_LowerBound(benchmark::State& state) {
  const DesignConfig cfg = case1();
  for (auto _ : state) benchmark::DoNotOptimize(compute_lower_bound(cfg));
  state.SetLabel("case1");
}
BENCHMARK(BM_LowerBound)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
