#include <benchmark/benchmark.h>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/spectrum.hpp"
#include "casimir/types.hpp"

using namespace casimir;

namespace {
const PhysicalSetup setup100(100e-9);

DielectricModel gold() {
  return DielectricModel(DrudeModel(9.0 * constants::eV_to_rad_s, 0.035 * constants::eV_to_rad_s));
}
}  // namespace

static void BM_imag_pressure_const_r(benchmark::State& state) {
  const PlatePair plates{ConstantReflection(0.8)};
  const QuadratureSpec quad = QuadratureSpec::defaults(setup100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_imag_frequency(plates, setup100, quad));
  }
}
BENCHMARK(BM_imag_pressure_const_r)->Unit(benchmark::kMillisecond);

static void BM_imag_pressure_gold(benchmark::State& state) {
  const PlatePair plates{gold()};
  const QuadratureSpec quad = QuadratureSpec::defaults(setup100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_imag_frequency(plates, setup100, quad));
  }
}
BENCHMARK(BM_imag_pressure_gold)->Unit(benchmark::kMillisecond);

// One real-frequency spectral sample near the first cavity resonance, the
// cost unit the full real-axis integral repeats per panel node.
static void BM_real_density_gold(benchmark::State& state) {
  const PlatePair plates{gold()};
  const QuadratureSpec quad = QuadratureSpec::defaults(setup100);
  const double omega = setup100.omega(4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(material_spectral_density(plates, setup100, omega, quad));
  }
}
BENCHMARK(BM_real_density_gold)->Unit(benchmark::kMillisecond);

static void BM_real_pressure_gold_truncated(benchmark::State& state) {
  const PlatePair plates{gold()};
  QuadratureSpec quad = QuadratureSpec::defaults(setup100);
  quad.omega_max = setup100.omega(double(state.range(0)));
  quad.cutoff_delta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_real_frequency(plates, setup100, quad));
  }
}
BENCHMARK(BM_real_pressure_gold_truncated)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_effective_reflection(benchmark::State& state) {
  const double per_sigma = 0.5 * constant_r_pressure(ConstantReflection(0.7), setup100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_reflection(per_sigma, per_sigma, setup100));
  }
}
BENCHMARK(BM_effective_reflection)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
