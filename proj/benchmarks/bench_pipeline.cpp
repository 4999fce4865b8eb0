#include "bcinv/characterization.hpp"
#include "bcinv/inversion.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace bcinv;

namespace {

MatrixFunction1D potential(int m) {
    const SpaceTimeGrid grid(2, 1.0, m);
    std::vector<Matrix> samples;
    for (int i = 0; i <= m; ++i) {
        const double x = grid.x(i);
        Matrix v(2, 2);
        v << std::sin(x), 0.3, -0.1, std::cos(x);
        samples.push_back(v);
    }
    return {grid, std::move(samples)};
}

void BM_Forward(benchmark::State& state) {
    const auto v = potential(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_response(v));
    state.SetComplexityN(state.range(0));
}

void BM_Invert(benchmark::State& state) {
    const auto r = forward_response(potential(static_cast<int>(state.range(0))));
    const InversionOptions options{static_cast<Method>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(invert_response(r, options));
    state.SetLabel(std::string(to_string(options.method)));
}

void BM_Sweep(benchmark::State& state) {
    const auto r = forward_response(potential(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(sigma_min_sweep(r));
}

}  // namespace

BENCHMARK(BM_Forward)->RangeMultiplier(2)->Range(50, 800)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_Invert)
    ->ArgsProduct({{50, 100, 200}, {static_cast<int>(Method::amplitude), static_cast<int>(Method::resolvent)}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
