// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "ftbn/compiler.hpp"
#include "ftbn/inference.hpp"

namespace {

using ftbn::Execution;

ftbn::Factor random_factor(std::vector<std::size_t> scope, std::mt19937_64& rng) {
    std::vector<std::size_t> cards(scope.size(), 2);
    std::vector<double> values(std::size_t{1} << scope.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& v : values) v = unit(rng);
    return ftbn::Factor(std::move(scope), std::move(cards), std::move(values));
}

const ftbn::BayesianNetwork& plc_network() {
    static const ftbn::BayesianNetwork bn = [] {
        const auto ft = ftbn::plc_case_study_rounded_priors();
        return ftbn::compile(ft, ftbn::probability_table(ft.primaries, ftbn::MissionTime(4e5))).bn;
    }();
    return bn;
}

void BM_FactorProduct(benchmark::State& state, Execution exec) {
    std::mt19937_64 rng(1);
    // Two 14-variable factors sharing 6 variables: 2^22 output entries.
    std::vector<std::size_t> a_scope, b_scope;
    for (std::size_t i = 0; i < 14; ++i) a_scope.push_back(i);
    for (std::size_t i = 8; i < 22; ++i) b_scope.push_back(i);
    const auto a = random_factor(a_scope, rng);
    const auto b = random_factor(b_scope, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ftbn::product(a, b, exec));
}

void BM_SumOut(benchmark::State& state, Execution exec) {
    std::mt19937_64 rng(2);
    std::vector<std::size_t> scope;
    for (std::size_t i = 0; i < 22; ++i) scope.push_back(i);
    const auto f = random_factor(scope, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ftbn::sum_out(f, 5, exec));
}

void BM_EnumerateJointPlc(benchmark::State& state, Execution exec) {
    const ftbn::InferenceEngine engine(plc_network(), exec);
    for (auto _ : state) benchmark::DoNotOptimize(engine.enumerate_joint({{"TE", "faulty"}}));
}

void BM_TopKDiagnosesPlc(benchmark::State& state, Execution exec) {
    const ftbn::InferenceEngine engine(plc_network(), exec);
    for (auto _ : state) benchmark::DoNotOptimize(engine.top_k_diagnoses({{"TE", "faulty"}}, 18));
}

void BM_PosteriorMarginalsPlc(benchmark::State& state, Execution exec) {
    const ftbn::InferenceEngine engine(plc_network(), exec);
    for (auto _ : state)
        for (const auto& root : engine.roots()) benchmark::DoNotOptimize(engine.marginal(root, {{"TE", "faulty"}}));
}

}  // namespace

BENCHMARK_CAPTURE(BM_FactorProduct, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FactorProduct, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SumOut, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SumOut, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnumerateJointPlc, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnumerateJointPlc, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TopKDiagnosesPlc, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TopKDiagnosesPlc, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PosteriorMarginalsPlc, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PosteriorMarginalsPlc, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
