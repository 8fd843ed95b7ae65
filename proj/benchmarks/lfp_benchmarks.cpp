#include <benchmark/benchmark.h>

#include "lfp/basis.hpp"
#include "lfp/classify.hpp"
#include "lfp/random.hpp"
#include "lfp/shrinkage.hpp"
#include "lfp/synth.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  lfp::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

void BM_ForwardTransform(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const lfp::TrigBasisTable table(N, lfp::nyquist_coefficient_cap(N));
  const auto y = noise(N, 1);
  for (auto _ : state) benchmark::DoNotOptimize(table.analyze(y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N));
}
BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(500)->Arg(1024);

void BM_BjsEstimate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const lfp::CoefficientVector y(noise(n, 2), 0.05);
  const auto partition = lfp::dyadic_blocks(2, lfp::bjs_levels_for(n + 1));
  for (auto _ : state) benchmark::DoNotOptimize(lfp::bjs_estimate(y, partition));
}
BENCHMARK(BM_BjsEstimate)->Arg(255)->Arg(2047);

void BM_PinskerMu(benchmark::State& state) {
  const lfp::EllipsoidSpec spec(2.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(lfp::pinsker_mu(spec, 1e-3));
}
BENCHMARK(BM_PinskerMu);

void BM_CrossValidate(benchmark::State& state) {
  const auto model = lfp::make_class_model(8, lfp::EllipsoidSpec(2.0, 10.0), 5, 0.5, 0.1, 1);
  const auto ds = lfp::generate_dataset(model, 20, 8, 500, 5, lfp::NoiseModel{8.0}, 2);
  auto config = lfp::PipelineConfig::pinsker_defaults();
  config.P = 40;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lfp::cross_validate(ds, config, lfp::CvScheme::leave_one_session_out()));
  }
}
BENCHMARK(BM_CrossValidate)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
