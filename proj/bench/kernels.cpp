// Serial reference vs OpenMP kernels. Run: ./seisreg_bench --benchmark_filter=Median
#include <benchmark/benchmark.h>

#include "seisreg/mlp.hpp"
#include "seisreg/resample.hpp"
#include "seisreg/rng.hpp"
#include "seisreg/volpost.hpp"

namespace sr = seisreg;

namespace {

sr::Volume noisy_volume(std::size_t n) {
  sr::VolumeGeometry g;
  for (std::size_t i = 0; i < n; ++i) {
    g.inlines.push_back(static_cast<std::int32_t>(i));
    g.xlines.push_back(static_cast<std::int32_t>(i));
  }
  g.n_samples = 2 * n;
  sr::Volume v(g, "bench");
  sr::Rng rng(1);
  for (auto& x : v.data) x = rng.uniform();
  std::fill(v.valid.begin(), v.valid.end(), std::uint8_t{1});
  return v;
}

sr::Exec exec_of(const benchmark::State& s) {
  return s.range(0) == 0 ? sr::Exec::serial : sr::Exec::parallel;
}

void BM_Median3d(benchmark::State& state) {
  const auto v = noisy_volume(48);
  for (auto _ : state) benchmark::DoNotOptimize(sr::median_filter_3d(v, {3, false}, exec_of(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_Median3d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PredictVolume(benchmark::State& state) {
  const auto a = noisy_volume(48), b = noisy_volume(48), c = noisy_volume(48);
  sr::TrainedModel m;
  m.mlp = sr::init_model(3, 10, 7);
  m.input_stats = {{0.5, 0.5, 0.5}, {0.3, 0.3, 0.3}};
  const sr::SeismicVolume* attrs[] = {&a, &b, &c};
  for (auto _ : state) benchmark::DoNotOptimize(sr::predict_volume(m, attrs, exec_of(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_PredictVolume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SincResample(benchmark::State& state) {
  sr::TimeSeries src;
  src.dt_ms = 2.0;
  sr::Rng rng(3);
  for (int i = 0; i < 2000; ++i) src.values.push_back(rng.normal());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sr::sinc_resample(src, 10.0, 0.5, 7000, exec_of(state)));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_SincResample)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MlpGradient(benchmark::State& state) {
  const auto model = sr::init_model(3, 10, 11);
  sr::Rng rng(5);
  std::vector<double> x(3 * 20000), d(20000);
  for (auto& v : x) v = rng.normal();
  for (auto& v : d) v = rng.uniform(0.1, 0.9);
  const sr::PatternView view{x, d, 3};
  for (auto _ : state) benchmark::DoNotOptimize(sr::gradient(model, view, exec_of(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_MlpGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
