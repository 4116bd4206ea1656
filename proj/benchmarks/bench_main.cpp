// Microbenchmarks for the hot paths: the quadrature-backed count kernel,
// the error-report sweep it feeds, shot simulation, and the likelihood fit.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "tweezerdet/count_model.hpp"
#include "tweezerdet/inference.hpp"
#include "tweezerdet/presets.hpp"
#include "tweezerdet/rng.hpp"
#include "tweezerdet/simulate.hpp"

using namespace tweezerdet;

namespace {

DetectionParams nominal_detection() {
    DetectionParams p{};
    p.r_bright = 19600.0;
    p.r_background = 60.0;
    p.r_dep_bright = 25.0;
    p.r_dep_dark = 2.975;
    p.t_d = 5e-4;
    p.threshold = 2;
    p.collection_efficiency = 0.0037;
    return p;
}

void bm_count_kernel(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            count_distribution_kernel(n, 19660.0, 60.0, 25.0, 5e-4));
    }
}
BENCHMARK(bm_count_kernel)->Arg(0)->Arg(2)->Arg(10)->Arg(30);

void bm_error_report(benchmark::State& state) {
    const auto params = nominal_detection();
    for (auto _ : state) {
        benchmark::DoNotOptimize(error_report(params));
    }
}
BENCHMARK(bm_error_report);

void bm_optimal_threshold(benchmark::State& state) {
    const auto params = nominal_detection();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_threshold(params, 1, 10));
    }
}
BENCHMARK(bm_optimal_threshold);

void bm_optimal_time(benchmark::State& state) {
    const auto params = nominal_detection();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_time(params, 1e-4, 1e-3, 2));
    }
}
BENCHMARK(bm_optimal_time);

void bm_simulate_shot(benchmark::State& state) {
    const auto scenario = make_preset("paper-final");
    std::uint64_t index = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_shot(scenario.detection, scenario.protocol,
                                               scenario.heating, PreparedState::bright,
                                               12345, index++));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_simulate_shot);

void bm_run_batch_10k(benchmark::State& state) {
    const auto scenario = make_preset("paper-final");
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch(scenario.detection, scenario.protocol,
                                           scenario.heating, PreparedState::bright,
                                           10000, 12345, int(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_run_batch_10k)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_fit_depump(benchmark::State& state) {
    // Canned synthetic histogram: inverse-CDF draw from the analytic law.
    const double r_p = 19660.0, r_np = 60.0, r_dep = 265.0, t_d = 7.6e-4;
    std::vector<double> cdf;
    double acc = 0.0;
    int n = 0;
    while (acc < 1.0 - 1e-12 && n < 400) {
        acc += count_distribution_kernel(n, r_p, r_np, r_dep, t_d);
        cdf.push_back(acc);
        ++n;
    }
    Xoshiro256pp rng(4242);
    std::vector<int> counts(10000);
    for (auto& c : counts) {
        const double u = rng.uniform() * acc;
        c = int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
    const auto hist = histogram_from_records(counts, PreparedState::bright, "bench");
    DetectionParams init = nominal_detection();
    init.t_d = t_d;
    init.r_dep_bright = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_depump(hist, init, 0.0037));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_fit_depump)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
