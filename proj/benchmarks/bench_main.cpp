#include "coatscat/bor_solver.hpp"
#include "coatscat/geometry.hpp"
#include "coatscat/mie.hpp"
#include "coatscat/modal_kernel.hpp"
#include "coatscat/pulse.hpp"
#include "coatscat/synthesis.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace cs = coatscat;

static void BM_ModalKernelNear(benchmark::State &state) {
  const cs::RingPoint obs{0.8, 0.1, 0.6, 0.8};
  const cs::RingPoint src{0.81, 0.11, 0.6, 0.8};
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::modal_kernels(1, obs, src, 2.0, true));
}
BENCHMARK(BM_ModalKernelNear);

static void BM_ModalKernelFar(benchmark::State &state) {
  const cs::RingPoint obs{0.8, 0.1, 0.6, 0.8};
  const cs::RingPoint src{0.4, 1.5, 0.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::modal_kernels(1, obs, src, 2.0, true));
}
BENCHMARK(BM_ModalKernelFar);

static void BM_MieCoated(benchmark::State &state) {
  const cs::SphereSpec s{1.0, 0.3, 2.0};
  const double kappa = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::coated_sphere_fsr(kappa, s));
}
BENCHMARK(BM_MieCoated)->Arg(1)->Arg(10)->Arg(30);

static void BM_SolvePecSphere(benchmark::State &state) {
  const auto mesh = cs::mesh_profile(cs::sphere_profile(1.0), 2.0, 15.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::solve_frequency(mesh, std::nullopt, 1.0, 1.0));
}
BENCHMARK(BM_SolvePecSphere)->Unit(benchmark::kMillisecond);

static void BM_SolveCoatedSphere(benchmark::State &state) {
  const auto pec = cs::sphere_profile(1.0);
  const double index = std::sqrt(2.0);
  const auto m1 = cs::mesh_profile(pec, 2.25, 15.0, index);
  const auto m2 = cs::mesh_profile(cs::offset_profile(pec, 0.3), 2.25, 15.0, index);
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::solve_frequency(m1, m2, 2.0, 1.0));
}
BENCHMARK(BM_SolveCoatedSphere)->Unit(benchmark::kMillisecond);

static void BM_Synthesize(benchmark::State &state) {
  cs::FsrTable fsr;
  for (int i = 1; i <= 64; ++i) {
    const double k = 2.25 * i / 64.0;
    fsr.samples.push_back(cs::FsrSample::from_complex(k, cs::pec_sphere_fsr(k)));
  }
  const auto pulse = cs::PulseSpec::from_duration(4.0, 2.25);
  const cs::TimeGrid grid{-2.0, 0.01, 1000};
  for (auto _ : state)
    benchmark::DoNotOptimize(cs::synthesize(fsr, pulse, grid));
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
