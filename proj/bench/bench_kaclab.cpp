#include <benchmark/benchmark.h>

#include "kaclab/experiments.hpp"
#include "kaclab/kac_poly.hpp"
#include "kaclab/root_engine.hpp"

using namespace kaclab;

namespace {

TrialFn count_trial(int n)
{
    return [n](TrialSink& s) {
        const auto p = sample_polynomial(CoefficientLaw::gaussian(), n, 7, s.trial());
        s.add(n, "N", count_roots(p.view(n), Interval::closed(0, 1)).count);
    };
}

void BM_trials_serial(benchmark::State& st)
{
    const auto fn = count_trial(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(run_trials_serial("bench", "gaussian", 64, fn));
    st.SetItemsProcessed(st.iterations() * 64);
}

void BM_trials_parallel(benchmark::State& st)
{
    const auto fn = count_trial(static_cast<int>(st.range(0)));
    const int workers = static_cast<int>(st.range(1));
    for (auto _ : st)
        benchmark::DoNotOptimize(run_trials_parallel("bench", "gaussian", 64, workers, fn));
    st.SetItemsProcessed(st.iterations() * 64);
}

void BM_count(benchmark::State& st, CountMethod method)
{
    const int n = static_cast<int>(st.range(0));
    std::vector<PolynomialSample> polys;
    for (int t = 0; t < 16; ++t)
        polys.push_back(sample_polynomial(CoefficientLaw::gaussian(), n, 11, t));
    const auto I = Interval::closed(-1, 1);
    std::size_t i = 0;
    for (auto _ : st) {
        const auto& p = polys[i++ % polys.size()];
        benchmark::DoNotOptimize(method == CountMethod::sturm ? sturm_count(p.view(n), I).count
                                                              : descartes_count(p.view(n), I).count);
    }
}

void BM_sturm(benchmark::State& st)
{
    BM_count(st, CountMethod::sturm);
}

void BM_descartes(benchmark::State& st)
{
    BM_count(st, CountMethod::descartes);
}

}  // namespace

BENCHMARK(BM_trials_serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trials_parallel)->Args({256, 1})->Args({256, 2})->Args({256, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sturm)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_descartes)->RangeMultiplier(2)->Range(8, 1024)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
