#include "lisible/models.hpp"
#include "lisible/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lisible;

const LabeledDataset& dataset() {
    static const LabeledDataset ds = [] {
        SynthOptions opts;
        opts.n_pairs = 200;
        const auto lex = synthetic_lexicons();
        LabeledDataset out;
        for (const auto& s : generate_synthetic(opts)) {
            out.items.push_back({s.stem, extract_features(s.doc, lex).features, s.label, std::nullopt});
        }
        return out;
    }();
    return ds;
}

void BM_TrainRidge(benchmark::State& state) {
    const auto& ds = dataset();
    for (auto _ : state) benchmark::DoNotOptimize(train_ridge(ds));
}
BENCHMARK(BM_TrainRidge)->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
    ForestParams p;
    p.n_trees = static_cast<std::size_t>(state.range(0));
    const auto& ds = dataset();
    for (auto _ : state) benchmark::DoNotOptimize(train_random_forest(ds, p, 1));
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainMlp(benchmark::State& state) {
    MlpParams p;
    p.epochs = 50;
    const auto& ds = dataset();
    for (auto _ : state) benchmark::DoNotOptimize(train_mlp(ds, p, 1));
}
BENCHMARK(BM_TrainMlp)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
    const auto m = train_random_forest(dataset(), {}, 1);
    const auto& fv = dataset().items.front().features;
    for (auto _ : state) benchmark::DoNotOptimize(predict_proba(m, fv));
}
BENCHMARK(BM_PredictForest);

}  // namespace
