#include <benchmark/benchmark.h>

#include "cfdim/construction.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"

using namespace cfdim;

namespace {

const CFWord kWord{3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8};

void BM_Lebesgue(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue(kWord));
}
BENCHMARK(BM_Lebesgue);

void BM_Gauss(benchmark::State& state) {
  const long prec = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(gauss(kWord, prec));
}
BENCHMARK(BM_Gauss)->Arg(128)->Arg(512);

void BM_KraaikampRatio(benchmark::State& state) {
  const Integer i(1000003);
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue_ratio(kWord, i));
}
BENCHMARK(BM_KraaikampRatio);

void BM_EncodeDecode(benchmark::State& state) {
  for (auto _ : state) {
    Encoding e = encode_full(kWord);
    benchmark::DoNotOptimize(decode(e));
  }
}
BENCHMARK(BM_EncodeDecode);

void BM_Divide(benchmark::State& state) {
  const DyadicWord w(std::string(static_cast<std::size_t>(state.range(0)), '0') + "1");
  for (auto _ : state) benchmark::DoNotOptimize(divide(w));
}
BENCHMARK(BM_Divide)->Arg(4)->Arg(13);

void BM_GaussGaleCondition(benchmark::State& state) {
  auto d = gauss_gale(Rational(2, 5));
  const CFWord v{2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(check_gale_condition(*d, v, Integer(state.range(0))));
}
BENCHMARK(BM_GaussGaleCondition)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SmoothedGaleValue(benchmark::State& state) {
  auto p = cf_to_binary_pipeline(gauss_gale(Rational(2, 5)), Rational(1, 2));
  const DyadicWord w("0110100111");
  for (auto _ : state) benchmark::DoNotOptimize(p.gale->value(w, kDefaultPrecision));
}
BENCHMARK(BM_SmoothedGaleValue)->Unit(benchmark::kMillisecond);

void BM_LevelCoverMass(benchmark::State& state) {
  const Schedule sched = build_schedule(Rational(2, 5), 3);
  for (auto _ : state) benchmark::DoNotOptimize(level_cover_mass(sched, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_LevelCoverMass)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
