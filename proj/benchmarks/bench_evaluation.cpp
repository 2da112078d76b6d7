#include "lisible/evaluation.hpp"
#include "lisible/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lisible;

std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
    return out;
}

void BM_BwsDesign(benchmark::State& state) {
    const auto texts = ids(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(generate_bws_design(texts, 12, 3, 1, 1));
}
BENCHMARK(BM_BwsDesign)->Arg(48)->Arg(480)->Unit(benchmark::kMillisecond);

void BM_SplitHalf(benchmark::State& state) {
    const auto design = generate_bws_design(ids(48), 12, 3, 4, 1);
    Rng rng(3);
    std::vector<BwsResponse> responses;
    for (const auto& t : design.tuples) {
        for (int a = 0; a < 4; ++a) {
            const auto best = rng.below(3);
            responses.push_back({t.id, "a" + std::to_string(a), t.texts[best], t.texts[(best + 1) % 3], ""});
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(split_half_reliability(design, responses, 100, 1));
}
BENCHMARK(BM_SplitHalf)->Unit(benchmark::kMillisecond);

void BM_Icc2(benchmark::State& state) {
    Rng rng(5);
    std::vector<std::vector<double>> m(200, std::vector<double>(6));
    for (auto& row : m) {
        for (auto& v : row) v = rng.uniform(0, 100);
    }
    for (auto _ : state) benchmark::DoNotOptimize(icc2(m));
}
BENCHMARK(BM_Icc2);

}  // namespace
