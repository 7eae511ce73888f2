// Serial reference vs OpenMP kernels: replication fan-out of the Monte Carlo
// harness and the blocked component reduction for one large sample.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "dsmooth/simulate.hpp"
#include "dsmooth/smooth_test.hpp"

using Clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  const long reps = argc > 1 ? std::atol(argv[1]) : 4000;
  std::printf("threads available: %d\n", omp_get_max_threads());

  dsmooth::SimulationConfig config;
  config.model = dsmooth::ModelId::MOD3;
  config.n = 200;
  config.replications = reps;
  config.master_seed = 7;

  dsmooth::SimulationReport serial, parallel;
  const double ts = seconds([&] { serial = dsmooth::run_simulation_serial(config); });
  const double tp = seconds([&] { parallel = dsmooth::run_simulation(config); });
  std::printf("replications  n=%d reps=%ld  serial %.3fs  openmp %.3fs  speedup %.2fx  identical=%s\n", config.n,
              reps, ts, tp, ts / tp, serial.rejections == parallel.rejections ? "yes" : "no");

  const auto model = dsmooth::model_registry(dsmooth::ModelId::MOD4);
  dsmooth::RandomStream rng(11);
  const auto draw = dsmooth::generate_sample(model, 1 << 20, 0.0, rng);
  const auto bx = dsmooth::build_basis(model.noise_z, 10);
  const auto bu = dsmooth::build_basis(model.noise_w, 10);
  const double cs = seconds([&] { (void)dsmooth::summarize_components_serial(draw.x, draw.u, bx, bu, 10); });
  const double cp = seconds([&] { (void)dsmooth::summarize_components(draw.x, draw.u, bx, bu, 10); });
  std::printf("components    n=%zu k=10  serial %.3fs  blocked %.3fs  speedup %.2fx\n", draw.x.size(), cs, cp,
              cs / cp);
  return 0;
}
