#include <benchmark/benchmark.h>

#include <numeric>

#include "chaosnet/dataset.hpp"
#include "chaosnet/evaluation.hpp"
#include "chaosnet/iteration_graph.hpp"
#include "chaosnet/metric.hpp"
#include "chaosnet/mlp.hpp"

using namespace chaosnet;

static void BM_CertifyNegation(benchmark::State& state) {
    const auto f = maps::negation(static_cast<unsigned>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(certify_chaos(f));
    state.SetComplexityN(state.range(0) << state.range(0));
}
BENCHMARK(BM_CertifyNegation)->DenseRange(10, 16, 2)->Unit(benchmark::kMillisecond);

static void BM_Steer(benchmark::State& state) {
    const IterationGraph graph(maps::shift_negation(static_cast<unsigned>(state.range(0))));
    const auto n = static_cast<unsigned>(state.range(0));
    const BoolConfig x(n, 0);
    const BoolConfig y(n, (1u << n) - 1);
    for (auto _ : state) benchmark::DoNotOptimize(steer(graph, x, y));
}
BENCHMARK(BM_Steer)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_EnumerateDataset(benchmark::State& state) {
    const auto f = maps::example_g();
    const auto k = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_dataset(f, k, Scheme::Boolean));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(count_pairs(4, k).total));
}
BENCHMARK(BM_EnumerateDataset)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_SeparatedSetCurve(benchmark::State& state) {
    const auto f = maps::negation(4);
    const auto sample = sample_points(4, static_cast<std::size_t>(state.range(0)), 16, 1);
    for (auto _ : state) benchmark::DoNotOptimize(separated_set_curve(f, sample, 8, 1.0));
}
BENCHMARK(BM_SeparatedSetCurve)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

namespace {
TrainingSet full_training_set(const Dataset& ds) {
    std::vector<std::size_t> rows(ds.samples.size());
    std::iota(rows.begin(), rows.end(), 0);
    return make_training_set(ds, rows);
}
}  // namespace

static void BM_LossAndGradient(benchmark::State& state) {
    const auto ds = enumerate_dataset(maps::example_g(), 3, Scheme::Boolean);
    const auto set = full_training_set(ds);
    const auto hidden = static_cast<std::size_t>(state.range(0));
    const auto model = init_model({set.inputs, hidden, set.outputs}, 1);
    std::vector<double> grad(model.parameters.size());
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_and_gradient(model.dims, model.parameters, set, grad));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(set.rows));
}
BENCHMARK(BM_LossAndGradient)->Arg(10)->Arg(25)->Arg(40)->Unit(benchmark::kMicrosecond);

static void BM_TrainEpochs(benchmark::State& state) {
    const auto ds = enumerate_dataset(maps::example_g(), 3, Scheme::Gray);
    const auto set = full_training_set(ds);
    TrainConfig cfg;
    cfg.max_epochs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto model = init_model({set.inputs, 25, set.outputs}, 1);
        benchmark::DoNotOptimize(lbfgs_train(std::move(model), set, set, cfg));
    }
}
BENCHMARK(BM_TrainEpochs)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
