#include <benchmark/benchmark.h>

#include "pep/lindblad.hpp"
#include "pep/moments.hpp"
#include "pep/phase_space.hpp"
#include "pep/spectral.hpp"

namespace {

pep::ModelParams drive(double omega) {
  pep::ModelParams p;
  p.omega = omega;
  return p;
}

void BM_MomentSystems(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(pep::first_moment_system(drive(1.2)));
    benchmark::DoNotOptimize(pep::second_moment_system(drive(1.2)));
  }
}
BENCHMARK(BM_MomentSystems);

void BM_EigGeneral(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const pep::ComplexMatrix a = pep::ComplexMatrix::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(pep::eig_general(a, false));
}
BENCHMARK(BM_EigGeneral)->Arg(16)->Arg(128)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_BuildLiouvillian(benchmark::State& state) {
  const pep::FockSpace space(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pep::Liouvillian(drive(1.0), space));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const pep::Liouvillian L(drive(1.0), pep::FockSpace(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pep::steady_state(L));
}
BENCHMARK(BM_SteadyState)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const pep::FockSpace space(static_cast<int>(state.range(0)));
  const pep::Liouvillian L(drive(1.0), space);
  const std::vector<double> ts = pep::linspace(0.0, 6.0, 121);
  for (auto _ : state) benchmark::DoNotOptimize(pep::evolve(pep::state_fock(space, 1), L, ts));
}
BENCHMARK(BM_Evolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Gap(benchmark::State& state) {
  const pep::Liouvillian L(drive(1.2), pep::FockSpace(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pep::gap(L));
}
BENCHMARK(BM_Gap)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Husimi(benchmark::State& state) {
  const pep::QuantumState rho = pep::steady_state(pep::Liouvillian(drive(1.0), pep::FockSpace(40)));
  for (auto _ : state) benchmark::DoNotOptimize(pep::husimi(rho));
}
BENCHMARK(BM_Husimi)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
