#include <benchmark/benchmark.h>

#include <random>

#include "lowsig/local_stats.hpp"
#include "lowsig/lsc_af.hpp"
#include "lowsig/lsc_ft.hpp"
#include "lowsig/recon.hpp"
#include "lowsig/simulator.hpp"

using namespace lowsig;

namespace {

SinogramGrid noisy_counts(Dims d) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  SinogramGrid g(d, Stage::Counts);
  for (double& v : g.values()) v = u(gen);
  return g;
}

void BM_LocalStats(benchmark::State& state) {
  const auto g = noisy_counts({static_cast<std::size_t>(state.range(0)), 5, 90});
  for (auto _ : state) benchmark::DoNotOptimize(local_stats(g, {3, 2, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_LocalStats)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Bilateral(benchmark::State& state) {
  const Dims d{static_cast<std::size_t>(state.range(0)), 5, 90};
  const auto x = af::vst_forward(noisy_counts(d));
  const af::AdaptiveParams p{SinogramGrid(d, Stage::Vst, 3.0), SinogramGrid(d, Stage::Vst, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(af::bilateral_filter(x, p, {6, 3, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_Bilateral)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_AfLsc(benchmark::State& state) {
  const auto g = noisy_counts({512, 5, 90});
  af::AfConfig cfg;
  cfg.sigma_e = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(af::af_lsc(g, cfg));
}
BENCHMARK(BM_AfLsc)->Unit(benchmark::kMillisecond);

void BM_FtLsc(benchmark::State& state) {
  const auto g = noisy_counts({512, 5, 90});
  for (auto _ : state) benchmark::DoNotOptimize(ft::ft_lsc(g, ft::FtConfig{}));
}
BENCHMARK(BM_FtLsc)->Unit(benchmark::kMillisecond);

void BM_Fbp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Geometry g = Geometry::parallel(n, 36.0 / static_cast<double>(n), 1, 360);
  Phantom ph;
  ph.ellipses.push_back({0.0, 0.0, 15.0, 10.0, 0.0, 0.2});
  const auto proj = sim::forward_project(ph, g);
  for (auto _ : state) benchmark::DoNotOptimize(recon::fbp(proj, 0, g, {n, 0.0, recon::Apodization::RamLak}));
}
BENCHMARK(BM_Fbp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
