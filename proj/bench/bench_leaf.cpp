// Serial reference vs OpenMP kernels for the discrete leaf functional.

#include <benchmark/benchmark.h>

#include <cmath>

#include "leafstab/leaf.hpp"

using namespace leafstab;
using namespace leafstab::leaf;

namespace {

std::shared_ptr<const DiscreteTriple> triple() {
  static const auto t = sample_triple(family_triple("torus-epsilon", {{"eps", Rational(1, 10)}}));
  return t;
}

DiscreteSection start(const Grid& g) {
  return DiscreteSection::sample(g, 1, [](double x1, double x2, std::size_t) { return 0.2 * std::sin(x1) + 0.1 * std::cos(x2); });
}

template <class F>
void run(benchmark::State& st, F f) {
  const Grid g(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)));
  const auto t = triple();
  const auto s = start(g);
  for (auto _ : st) benchmark::DoNotOptimize(f(*t, s));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.points()));
  st.counters["threads"] = static_cast<double>(thread_count());
}

void BM_FunctionalSerial(benchmark::State& st) { run(st, serial::functional); }
void BM_FunctionalOmp(benchmark::State& st) { run(st, omp::functional); }
void BM_GradientSerial(benchmark::State& st) { run(st, serial::gradient); }
void BM_GradientOmp(benchmark::State& st) { run(st, omp::gradient); }

}  // namespace

BENCHMARK(BM_FunctionalSerial)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_FunctionalOmp)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_GradientSerial)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_GradientOmp)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
