#include <benchmark/benchmark.h>

#include "symdyn/constructions.hpp"
#include "symdyn/omega.hpp"
#include "symdyn/shadowing.hpp"
#include "symdyn/synthesizers.hpp"

using namespace symdyn;

namespace {

SymbolStream champernowne() {
  StreamSpec spec;
  spec.kind = "champernowne";
  return SymbolStream(spec);
}

void BM_EnumerateGolden(benchmark::State& state) {
  const auto golden = Subshift::golden_mean();
  const auto r = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_blocks(golden, r));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_blocks(golden, r)));
}
BENCHMARK(BM_EnumerateGolden)->DenseRange(12, 24, 4);

void BM_EnumerateThreads(benchmark::State& state) {
  const auto full = Subshift::full_shift(2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_blocks(full, 20, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_EnumerateThreads)->Arg(1)->Arg(4);

void BM_CountBlocks(benchmark::State& state) {
  const auto golden = Subshift::golden_mean();
  for (auto _ : state) benchmark::DoNotOptimize(count_blocks(golden, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CountBlocks)->Arg(64)->Arg(1024);

void BM_RhoDistance(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const auto a = markov_cylinders(MarkovMeasure::bernoulli({0.3, 0.7}), t);
  const auto b = markov_cylinders(MarkovMeasure::bernoulli({0.6, 0.4}), t);
  for (auto _ : state) benchmark::DoNotOptimize(rho_distance(a, b, t));
}
BENCHMARK(BM_RhoDistance)->Arg(8)->Arg(16);

void BM_OmegaProfile(benchmark::State& state) {
  const auto x = champernowne();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(omega_profile(x, 3, n, n / 4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_OmegaProfile)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Shadow(benchmark::State& state) {
  const auto golden = Subshift::golden_mean();
  std::vector<Word> pts;
  const Word x = Word::from_digits("0100101001001010010100100101001001010010100");
  for (std::size_t i = 0; i + 8 <= x.size(); ++i) pts.push_back(x.slice(i, 8));
  const PseudoOrbit po(golden, 8, pts);
  for (auto _ : state) benchmark::DoNotOptimize(shadow(po).determined);
}
BENCHMARK(BM_Shadow);

void BM_SynthesizeGeneric(benchmark::State& state) {
  const auto nu = MarkovMeasure::bernoulli({0.5, 0.5});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_generic(nu, Subshift::full_shift(2), 1).prefix(n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SynthesizeGeneric)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ConstructMinimal(benchmark::State& state) {
  const std::vector<MarkovMeasure> targets{MarkovMeasure::bernoulli({0.2, 0.8}), MarkovMeasure::bernoulli({0.8, 0.2})};
  MinimalOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct_minimal_k(Subshift::full_shift(2), targets, opt));
}
BENCHMARK(BM_ConstructMinimal)->Arg(1)->Arg(4)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
