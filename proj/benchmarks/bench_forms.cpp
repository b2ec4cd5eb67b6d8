#include <benchmark/benchmark.h>

#include "cagt/forms/whitney.hpp"
#include "cagt/verify/random.hpp"

using namespace cagt;
using R = Rational;

static void BM_MonomialIntegral(benchmark::State& state) {
  const std::vector<int> a{3, 2, 1, 4};
  for (auto _ : state) benchmark::DoNotOptimize(simplex_monomial_integral<R>(a, R(1, 6)));
}
BENCHMARK(BM_MonomialIntegral);

static void BM_Wedge(benchmark::State& state) {
  const auto ctx = make_form_context(standard_simplex(static_cast<int>(state.range(0))), 2);
  gen::Rng rng(1);
  const auto a = rng.form<R>(ctx, 1), b = rng.form<R>(ctx, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->DenseRange(1, 3);

static void BM_DupontHomotopy(benchmark::State& state) {
  const auto ctx = make_form_context(standard_simplex(static_cast<int>(state.range(0))), 2);
  gen::Rng rng(2);
  const auto w = rng.form<R>(ctx, 1, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dupont_homotopy(w));
}
BENCHMARK(BM_DupontHomotopy)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

static void BM_WhitneyDeRham(benchmark::State& state) {
  const auto k = standard_simplex(static_cast<int>(state.range(0)));
  const auto ctx = make_form_context(k, 2);
  gen::Rng rng(3);
  Cochain<R> c(k, 2, 1);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.matrix<R>(2);
  for (auto _ : state) benchmark::DoNotOptimize(derham_map(whitney_map(ctx, c), 1));
}
BENCHMARK(BM_WhitneyDeRham)->DenseRange(1, 3);
