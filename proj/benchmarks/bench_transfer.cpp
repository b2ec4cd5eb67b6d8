#include <benchmark/benchmark.h>

#include "cagt/gauge/transferred.hpp"
#include "cagt/verify/random.hpp"

using namespace cagt;
using R = Rational;

static void BM_Certificate(benchmark::State& state) {
  const auto k = standard_simplex(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(make_simplicial_setup<R>(k, 2).certificate.granted);
}
BENCHMARK(BM_Certificate)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

// Fresh structure per iteration, so memo caches do not carry over.
static void BM_TransferredDifferential(benchmark::State& state) {
  const auto s = make_simplicial_setup<R>(standard_simplex(1), 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  gen::Rng rng(4);
  const auto gamma = rng.flat_nilpotent_gamma<R>(s.ctx);
  const auto y = TensorElem<R>::word(rng.word(n, s.cs->size()));
  for (auto _ : state) {
    const auto t = transfer_structure(s, gamma, {12, n, 64});
    benchmark::DoNotOptimize(t.engine.differential(y));
  }
}
BENCHMARK(BM_TransferredDifferential)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_FloatGatedTransfer(benchmark::State& state) {
  const auto s = make_simplicial_setup<Float64>(standard_simplex(1), 2, 40);
  Mat<Float64> x(2);
  x(0, 0) = x(0, 1) = x(1, 0) = Float64(1e-3);
  const auto gamma = PolyForm<Float64>::dhat(s.ctx, 1, x);
  const auto y = TensorElem<Float64>::word({2, 5});
  for (auto _ : state) {
    const auto t = transfer_structure(s, gamma, {static_cast<int>(state.range(0)), 2, 64});
    benchmark::DoNotOptimize(t.engine.differential(y));
  }
}
BENCHMARK(BM_FloatGatedTransfer)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_TransferredAction(benchmark::State& state) {
  const auto s = make_simplicial_setup<R>(standard_simplex(2), 2);
  gen::Rng rng(5);
  const auto gamma = rng.flat_nilpotent_gamma<R>(s.ctx);
  for (auto _ : state) {
    const auto t = transfer_structure(s, gamma, {12, 2, 64});
    benchmark::DoNotOptimize(transferred_action(s, t).value);
  }
}
BENCHMARK(BM_TransferredAction)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
