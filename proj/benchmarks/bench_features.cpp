#include "lisible/baselines.hpp"
#include "lisible/indicators.hpp"
#include "lisible/ingest.hpp"
#include "lisible/synth.hpp"

#include <benchmark/benchmark.h>

#include <sstream>

namespace {

using namespace lisible;

void BM_ExtractFeatures(benchmark::State& state) {
    const auto doc = synthesize_document(0.8, 1);
    const auto lex = synthetic_lexicons();
    std::size_t words = 0;
    for (const auto& s : doc.sentences) words += s.tokens.size();
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(doc, lex));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words));
}
BENCHMARK(BM_ExtractFeatures);

void BM_Baselines(benchmark::State& state) {
    const auto doc = synthesize_document(0.8, 2);
    for (auto _ : state) benchmark::DoNotOptimize(baseline_scores(doc));
}
BENCHMARK(BM_Baselines);

void BM_ParseConllu(benchmark::State& state) {
    std::ostringstream out;
    std::vector<Document> docs;
    for (std::uint64_t i = 0; i < 20; ++i) docs.push_back(synthesize_document(0.5, i, "d" + std::to_string(i)));
    write_conllu(out, docs);
    const std::string text = out.str();
    for (auto _ : state) benchmark::DoNotOptimize(parse_conllu(text, "bench"));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseConllu);

}  // namespace
