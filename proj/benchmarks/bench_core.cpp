#include <benchmark/benchmark.h>

#include "muhasse/census.hpp"
#include "muhasse/dieudonne.hpp"
#include "muhasse/hasse.hpp"
#include "muhasse/linalg.hpp"
#include "muhasse/newton.hpp"

using namespace muhasse;

static void BM_WittMul(benchmark::State& state) {
  const auto p = make_params(3, 1, 2, 1, static_cast<unsigned>(state.range(0)));
  const auto m = random_module(p, 1);
  const auto& R = m.ring();
  auto x = m.f_even()(0, 0), y = m.f_even()(1, 1);
  for (auto _ : state) {
    x = R.mul(x, y);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_WittMul)->Arg(1)->Arg(2);

static void BM_FrobeniusCharpoly(benchmark::State& state) {
  const auto p = make_params(2, 1, static_cast<unsigned>(state.range(0)));
  const auto m = random_module(p, 3);
  for (auto _ : state) benchmark::DoNotOptimize(frobenius_characteristic_polynomial(m));
}
BENCHMARK(BM_FrobeniusCharpoly)->Arg(2)->Arg(3)->Arg(5);

static void BM_NewtonPolygon(benchmark::State& state) {
  const auto p = make_params(3, 2, 3, 1, static_cast<unsigned>(state.range(0)));
  const auto m = random_module(p, 5);
  for (auto _ : state) benchmark::DoNotOptimize(newton_polygon(m));
}
BENCHMARK(BM_NewtonPolygon)->Arg(1)->Arg(2);

static void BM_HodgeAndHasse(benchmark::State& state) {
  const auto p = make_params(5, 1, 2);
  const auto m = random_module(p, 7);
  for (auto _ : state) {
    const auto h = hodge(m);
    benchmark::DoNotOptimize(mu_hasse(h));
    benchmark::DoNotOptimize(ell_rank(h));
  }
}
BENCHMARK(BM_HodgeAndHasse);

static void BM_Bt1Sample(benchmark::State& state) {
  const auto p = make_params(3, 1, 2, 1, 1, 1);
  const auto m = random_module(p.with_precision(2), 11).reduce();
  for (auto _ : state) {
    const auto bt1 = bt1_from_F_block(p, m.field_ptr(), m.f_even());
    const auto h = hodge(bt1);
    benchmark::DoNotOptimize(mu_hasse(h));
    benchmark::DoNotOptimize(ver_rank_profile(h));
  }
}
BENCHMARK(BM_Bt1Sample);

static void BM_RandomCensus(benchmark::State& state) {
  const auto p = make_params(2, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(run_random_census(p, 20, 1));
}
BENCHMARK(BM_RandomCensus)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
