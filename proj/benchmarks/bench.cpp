#include <benchmark/benchmark.h>

#include "cosmoee/classifier.hpp"
#include "cosmoee/dust_oracle.hpp"
#include "cosmoee/dynamics.hpp"
#include "cosmoee/eos.hpp"
#include "cosmoee/integrator.hpp"

namespace {

using namespace cosmoee;

const CosmoParams kP = natural_units(3.0);
const State kExpanding{1.0, 1.2, 0.05};

void BM_IntegrateDustDirect(benchmark::State& state) {
  IntegrationConfig cfg;
  cfg.mode = IntegrationMode::direct;
  for (auto _ : state) {
    Trajectory tr = integrate(kP, Eos::dust(), kExpanding, {0.0, 5.0}, cfg);
    benchmark::DoNotOptimize(tr.samples.data());
  }
}
BENCHMARK(BM_IntegrateDustDirect);

void BM_IntegrateDustConstrained(benchmark::State& state) {
  IntegrationConfig cfg;
  cfg.mode = IntegrationMode::constrained;
  for (auto _ : state) {
    Trajectory tr = integrate(kP, Eos::dust(), kExpanding, {0.0, 5.0}, cfg);
    benchmark::DoNotOptimize(tr.samples.data());
  }
}
BENCHMARK(BM_IntegrateDustConstrained);

void BM_IntegrateRadiationToBang(benchmark::State& state) {
  const Eos eos = Eos::gamma_law(4.0 / 3.0);
  for (auto _ : state) {
    Trajectory tr = integrate(kP, eos, State{1.0, 0.9, 0.4}, {0.0, -1e6});
    benchmark::DoNotOptimize(tr.samples.data());
  }
}
BENCHMARK(BM_IntegrateRadiationToBang);

void BM_NeutronPressure(benchmark::State& state) {
  const Eos eos = Eos::neutron_fermi(1.0);
  double rho = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eos.pressure(rho));
    rho = rho < 1e6 ? rho * 1.7 : 1e-3;  // sweep both polytrope ends
  }
}
BENCHMARK(BM_NeutronPressure);

void BM_ClassifyRecollapse(benchmark::State& state) {
  for (auto _ : state) {
    ScenarioReport rep = classify(kP, Eos::dust(), State{1.0, 0.6, 2.0});
    benchmark::DoNotOptimize(rep.composite.data());
  }
}
BENCHMARK(BM_ClassifyRecollapse);

void BM_DustTimeIntegralInterior(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(dust::time_integral(0.5, 0.05, 0.3));
  }
}
BENCHMARK(BM_DustTimeIntegralInterior);

void BM_DustTimeIntegralRootEdge(benchmark::State& state) {
  const dust::CubicRoots roots = dust::cubic_roots(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dust::time_integral(0.5, roots.xi2, 2.5));
  }
}
BENCHMARK(BM_DustTimeIntegralRootEdge);

}  // namespace

BENCHMARK_MAIN();
