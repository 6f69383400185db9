#include <benchmark/benchmark.h>

#include "dimer/fockspace.hpp"
#include "dimer/gaussian.hpp"
#include "dimer/semiclassical.hpp"

using namespace dimer;

namespace {

const DimerParams kInside = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, 2.7);
const DimerParams kOutside = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, 1.8);

SemiclassicalSolution branch_at(const DimerParams& p, Branch b) {
    for (const auto& s : all_solutions(p))
        if (s.branch == b) return s;
    throw std::runtime_error("branch missing");
}

void BM_SolveSteady(benchmark::State& state) {
    const AmplitudePair guess{cplx(-0.5, -0.1), cplx(0.5, 0.1)};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_steady(kOutside, guess));
}
BENCHMARK(BM_SolveSteady);

void BM_AllSolutionsInsideWindow(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(all_solutions(kInside));
}
BENCHMARK(BM_AllSolutionsInsideWindow);

void BM_SolveMoments(benchmark::State& state) {
    const auto sol = branch_at(kOutside, Branch::symmetric);
    for (auto _ : state) benchmark::DoNotOptimize(solve_moments(sol));
}
BENCHMARK(BM_SolveMoments);

void BM_BuildLiouvillian(benchmark::State& state) {
    const auto sol = branch_at(kOutside, Branch::symmetric);
    FockConfig fc;
    fc.cutoff = static_cast<int>(state.range(0));
    fc.alpha1 = sol.alpha1;
    fc.alpha2 = sol.alpha2;
    const SpMat H = displaced_hamiltonian(kOutside, fc);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_liouvillian(H, fc, kOutside.gamma));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(6)->Arg(8)->Arg(10);

void BM_SteadyState(benchmark::State& state) {
    const auto sol = branch_at(kOutside, Branch::symmetric);
    FockConfig fc;
    fc.cutoff = static_cast<int>(state.range(0));
    fc.alpha1 = sol.alpha1;
    fc.alpha2 = sol.alpha2;
    const SpMat H = displaced_hamiltonian(kOutside, fc);
    const SpMat L = build_liouvillian(H, fc, kOutside.gamma);
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(L, fc));
}
BENCHMARK(BM_SteadyState)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
