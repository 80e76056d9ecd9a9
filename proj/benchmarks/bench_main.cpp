#include <benchmark/benchmark.h>

#include "stgan/gan.hpp"
#include "stgan/latent.hpp"
#include "stgan/sentiment.hpp"
#include "stgan/spectral.hpp"

using namespace stgan;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

void BM_Dft(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dft(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dft)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

void BM_ReconstructTopK(benchmark::State& state) {
  const auto s = dft(noise(2600, 2));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_topk(s, 9));
}
BENCHMARK(BM_ReconstructTopK);

void BM_LstmForwardBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  nn::Lstm lstm("lstm", kFeatureWidth, hidden, 3);
  Rng rng(4);
  nn::Tensor x({16, 30, kFeatureWidth});
  for (auto& v : x.data()) v = rng.normal();
  for (auto _ : state) {
    nn::Tape tape;
    const nn::Var h = lstm.forward(tape, tape.constant(x));
    tape.backward(nn::sum(h));
  }
}
BENCHMARK(BM_LstmForwardBackward)->Arg(128)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_NaiveBayesCorpus(benchmark::State& state) {
  const auto model = train_nb(load_seed_corpus(std::string(STGAN_FIXTURE_DIR) + "/seed_corpus.csv"));
  const auto docs = load_corpus(std::string(STGAN_FIXTURE_DIR) + "/corpus.jsonl");
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto& d : docs) n += analyze_document(model, d).size();
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_NaiveBayesCorpus);

void BM_FeatureMatrix(benchmark::State& state) {
  std::vector<PriceSeries> panel;
  for (const char* t : {"AIR.PA", "BA", "ERJ", "GE", "HON", "LMT", "NOC", "RTX"}) {
    panel.push_back(load_prices(std::string(STGAN_FIXTURE_DIR) + "/prices/" + t + ".csv", t));
  }
  const auto fits = fit_feature_arimas(panel);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_features(panel, {}, &fits));
}
BENCHMARK(BM_FeatureMatrix)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
