#include <benchmark/benchmark.h>

#include <cmath>

#include "sedgkit/catalog.hpp"
#include "sedgkit/integrators.hpp"
#include "sedgkit/linalg.hpp"
#include "sedgkit/wiener.hpp"

using namespace sedgkit;

namespace {

void BM_Expm(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    SquareMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = std::sin(1.0 + i * 7 + j);
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm(m));
    }
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(4)->Arg(8);

void BM_Generate(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(1, path++, 1, level, std::ldexp(1.0, -level)));
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << level));
}
BENCHMARK(BM_Generate)->Arg(10)->Arg(16);

// One step of a named scheme on its natural model.
void step_bench(benchmark::State& state, const char* model_name, const char* scheme_name, double h) {
    const ModelInstance model = make_model(model_name);
    const auto scheme = make_scheme(scheme_name, model);
    Vec x = model.default_x0;
    double dw = 0.1 * std::sqrt(h);
    for (auto _ : state) {
        x = scheme->step(x, h, std::span<const double>(&dw, 1));
        dw = -dw;
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK_CAPTURE(step_bench, sedg_poisson, "wind_poisson", "sedg_poisson", 1.0 / 64.0);
BENCHMARK_CAPTURE(step_bench, sedg_langevin, "damped_oscillator", "sedg_langevin", 1.0 / 64.0);
BENCHMARK_CAPTURE(step_bench, sedg_oscillator, "oscillator", "sedg_oscillator", 1.0 / 64.0);
BENCHMARK_CAPTURE(step_bench, sedg_general, "nonlinear_oscillator", "sedg", 1.0 / 32.0);
BENCHMARK_CAPTURE(step_bench, sem, "oscillator", "sem", 1.0 / 64.0);
BENCHMARK_CAPTURE(step_bench, milstein, "wind_poisson", "milstein", 1.0 / 64.0);

} // namespace
BENCHMARK_MAIN();
