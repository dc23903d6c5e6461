#include "ewr/analysis.hpp"
#include "ewr/forward.hpp"
#include "ewr/objective.hpp"
#include "ewr/spectral.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace ewr;

namespace {

void BM_SpectralRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec s{n, n / 320.0};
  const ComplexField f = random_wave(s, OpticalParams{}, 1);
  for (auto _ : state) {
    ComplexField g = inverse_spectral_transform(spectral_transform(inverse_spectral_transform(f)));
    benchmark::DoNotOptimize(g[0]);
  }
}
BENCHMARK(BM_SpectralRoundTrip)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_SimulateImage(benchmark::State& state) {
  OpticalParams p;
  p.delta_nm = state.range(1) > 1 ? 3.0 : 0.0;
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec s{n, n / 320.0};
  const ComplexField psi = random_wave(s, p, 2);
  const auto k = build_factorized_kernel(s, 5.0, p, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_image(psi, k)[0]);
}
BENCHMARK(BM_SimulateImage)->ArgsProduct({{128, 256}, {1, 7}})->Unit(benchmark::kMillisecond);

// One energy and gradient evaluation of the desk-scale problem.
void BM_EnergyGradient(benchmark::State& state) {
  const OpticalParams p;
  const GridSpec big{256, 0.8}, small{128, 0.4};
  const auto count = static_cast<std::size_t>(state.range(0));
  const double d = 0.017 / std::numbers::sqrt2;
  const FocusSeries s = simulate_series(make_synthetic_wave(big, perovskite_wave(0.4), p), small,
                                        focus_ramp(-10.0, 1.5, count), drift_ramp({d, d}, count), p, 1);
  const Objective obj(s, RegularizerSpec{1e-5, std::nullopt});
  const ComplexField psi = random_wave(small, p, 3);
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(psi, s.translations_nm).energy.total);
}
BENCHMARK(BM_EnergyGradient)->Arg(1)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
