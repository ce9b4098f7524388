#include <benchmark/benchmark.h>

#include <jpk/basis.hpp>
#include <jpk/moment_engine.hpp>
#include <jpk/operators.hpp>
#include <jpk/symbolic.hpp>

using namespace jpk;

static void BM_jain_basis(benchmark::State& state)
{
    const JainParams p(16, 0.5);
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jain_basis(p, k, 1.3));
}
BENCHMARK(BM_jain_basis)->Arg(3)->Arg(40)->Arg(1000);

static void BM_basis_partial_sum(benchmark::State& state)
{
    const JainParams p(static_cast<double>(state.range(0)), 0.5);
    const SeriesQuadConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(basis_partial_sum(p, 1.0, cfg).sum);
}
BENCHMARK(BM_basis_partial_sum)->Arg(8)->Arg(64)->Arg(512);

static void BM_basis_moment_integral(benchmark::State& state)
{
    const JainParams p(4, 0.3);
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(basis_moment_integral(p, k, 3));
}
BENCHMARK(BM_basis_moment_integral)->Arg(5)->Arg(50)->Arg(500);

static void BM_apply_phillips(benchmark::State& state)
{
    const JainParams p(static_cast<double>(state.range(0)), 0.25);
    const SeriesQuadConfig cfg;
    const TestFunction f = builtin_function("sin").f;
    for (auto _ : state) benchmark::DoNotOptimize(apply_phillips(p, f, 1.0, cfg));
}
BENCHMARK(BM_apply_phillips)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_p_poly_recur(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(p_poly_recur(8));
}
BENCHMARK(BM_p_poly_recur)->Unit(benchmark::kMicrosecond);

static void BM_exact_poly_multiply(benchmark::State& state)
{
    const ExactPoly a = p_poly_recur(4);
    const ExactPoly b = p_poly_recur(5);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_exact_poly_multiply)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
