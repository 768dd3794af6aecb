#include <benchmark/benchmark.h>

#include <random>

#include "lostructure/arak.hpp"
#include "lostructure/concentration.hpp"
#include "lostructure/gap.hpp"
#include "lostructure/harness.hpp"
#include "lostructure/recovery.hpp"

using namespace lostructure;

static void BM_WeightedSumLaw(benchmark::State& state) {
  auto F = DiscreteDistribution::uniform_range(0, 4);
  std::vector<Rational> a;
  for (long k = 0; k < state.range(0); ++k) a.push_back(frac(1 + k % 7, 1 + k % 3));
  auto w = WeightVector::scalars(a);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_sum_law(F, w).size());
}
BENCHMARK(BM_WeightedSumLaw)->Arg(50)->Arg(200)->Arg(600);

static void BM_ConcInterval(benchmark::State& state) {
  auto F = DiscreteDistribution::uniform_range(0, 4);
  auto Fa = weighted_sum_law(F, WeightVector::scalars(std::vector<Rational>(state.range(0), Rational(1))));
  for (auto _ : state) benchmark::DoNotOptimize(conc_interval(Fa, Rational(3)).value);
}
BENCHMARK(BM_ConcInterval)->Arg(100)->Arg(1000);

static void BM_GapImage(benchmark::State& state) {
  long L = state.range(0);
  Gap P(1, {Rational(L), Rational(L), Rational(L)}, {{Rational(1)}, {frac(1393, 985)}, {frac(7, 3)}});
  for (auto _ : state) benchmark::DoNotOptimize(image(P).size());
}
BENCHMARK(BM_GapImage)->Arg(5)->Arg(20);

static void BM_Sandwich(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<SymmetricPolytope> bodies;
  for (int i = 0; i < 16; ++i) bodies.push_back(random_polytope2(rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mahler_sandwich(bodies[i++ % bodies.size()]).achieved_t);
}
BENCHMARK(BM_Sandwich);

static void BM_BetaRank1(benchmark::State& state) {
  std::mt19937_64 rng(2);
  auto W = random_integer_measure(rng);
  for (auto _ : state) benchmark::DoNotOptimize(beta(W, Rational(1, 2), 1, state.range(0)).value);
}
BENCHMARK(BM_BetaRank1)->Arg(3)->Arg(9);

static void BM_Recover(benchmark::State& state) {
  auto c = thm4_case(0, 20240601);
  Constants k;
  k.c4 = 0.1925;
  auto params = make_recovery_params(c.inst.weight, c.inst.law, c.tau, c.kappa, c.delta, c.r, k);
  for (auto _ : state) benchmark::DoNotOptimize(recover(c.inst.weight, c.inst.law, params).m);
}
BENCHMARK(BM_Recover)->Unit(benchmark::kMillisecond);

static void BM_LogRank(benchmark::State& state) {
  auto c = lograank_case(4, 20240601);
  for (auto _ : state)
    benchmark::DoNotOptimize(lograank_construct(c.inst.weight, c.inst.law, c.tau, c.kappa, c.delta, 1.0).r);
}
BENCHMARK(BM_LogRank)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
