#include <benchmark/benchmark.h>

#include "mamax/inner_solver.hpp"
#include "mamax/rng.hpp"
#include "mamax/scenario.hpp"

namespace {

using namespace mamax;

struct Fixture {
  ScenarioInstance instance;
  AntennaPositioningVector apv;
  ChannelMatrix channels;
  PowerVector power;

  Fixture(int users, int antennas, int paths) {
    ScenarioConfig cfg;
    cfg.num_users = users;
    cfg.num_antennas = antennas;
    cfg.paths_per_user = paths;
    cfg.rng_seed = 7;
    instance = generate_scenario(cfg);
    Rng rng(99);
    apv.resize(static_cast<std::size_t>(antennas));
    for (auto& pos : apv) {
      pos.x = rng.uniform(-cfg.region_size / 2, cfg.region_size / 2);
      pos.y = rng.uniform(-cfg.region_size / 2, cfg.region_size / 2);
    }
    channels = channel_matrix(apv, instance.users, cfg.wavelength);
    power = PowerVector::Constant(users, cfg.p_max);
  }
};

const Fixture& desk() {
  static Fixture f(12, 16, 10);
  return f;
}

const Fixture& tiny() {
  static Fixture f(2, 2, 2);
  return f;
}

void BM_channel_matrix(benchmark::State& state) {
  const Fixture& f = desk();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        channel_matrix(f.apv, f.instance.users, f.instance.config.wavelength));
}
BENCHMARK(BM_channel_matrix);

void BM_mmse_combiner(benchmark::State& state) {
  const Fixture& f = desk();
  for (auto _ : state)
    benchmark::DoNotOptimize(mmse_combiner(f.channels, f.power, f.instance.config.noise_power));
}
BENCHMARK(BM_mmse_combiner);

void BM_bisection(benchmark::State& state) {
  const Fixture& f = desk();
  CombiningMatrix combining = mmse_combiner(f.channels, f.power, f.instance.config.noise_power);
  SinrCoefficients coeffs =
      sinr_coefficients(combining, f.channels, f.instance.config.noise_power);
  for (auto _ : state)
    benchmark::DoNotOptimize(bisection_max_min_sinr(
        coeffs, f.channels, f.instance.config.p_max, f.instance.config.noise_power, 1e-3));
}
BENCHMARK(BM_bisection);

void BM_bcd_desk(benchmark::State& state) {
  const Fixture& f = desk();
  for (auto _ : state)
    benchmark::DoNotOptimize(bcd_solve(f.channels, f.instance.config.p_max,
                                       f.instance.config.noise_power, 1e-3, 1e-3));
}
BENCHMARK(BM_bcd_desk);

void BM_bcd_tiny(benchmark::State& state) {
  const Fixture& f = tiny();
  for (auto _ : state)
    benchmark::DoNotOptimize(bcd_solve(f.channels, f.instance.config.p_max,
                                       f.instance.config.noise_power, 1e-3, 1e-3));
}
BENCHMARK(BM_bcd_tiny);

}  // namespace

BENCHMARK_MAIN();
