#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>

#include "symvqe/ansatz.hpp"
#include "symvqe/experiment.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/krylov.hpp"
#include "symvqe/ngd.hpp"
#include "symvqe/trotter.hpp"

using namespace symvqe;

namespace {

constexpr Labeling kLab = Labeling::SpinUniform;

// Built once; the compiled projector takes a while.
const ExperimentContext& ladder(bool project) {
  static std::unique_ptr<ExperimentContext> full, plain;
  auto& slot = project ? full : plain;
  if (!slot) {
    ExperimentConfig c;
    c.project_spatial = c.project_spin = c.project_eta = project;
    c.compute_exact = false;
    slot = std::make_unique<ExperimentContext>(c);
  }
  return *slot;
}

void BM_FullRegisterAnsatz(benchmark::State& st) {
  const LadderLattice lat(4, 2);
  const AnsatzCircuit a = build_efswap_ansatz(lat, kLab, static_cast<int>(st.range(0)));
  const CompiledCircuit c =
      CompiledCircuit::compile(a.full_circuit(random_parameters(a.n_params, 1, std::numbers::pi)));
  for (auto _ : st) {
    StateVector s(lat.n_qubits());
    c.apply(s);
    benchmark::DoNotOptimize(s[0]);
  }
}
BENCHMARK(BM_FullRegisterAnsatz)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SectorAnsatz(benchmark::State& st) {
  const auto& ctx = ladder(false);
  const AnsatzCircuit a = ctx.make_ansatz(static_cast<int>(st.range(0)));
  const SectorAnsatz sa(a, ctx.space());
  const auto theta = random_parameters(a.n_params, 1, std::numbers::pi);
  for (auto _ : st) benchmark::DoNotOptimize(sa.prepare(theta));
}
BENCHMARK(BM_SectorAnsatz)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PowerChain(benchmark::State& st) {
  const auto& ctx = ladder(false);
  const AnsatzCircuit a = ctx.make_ansatz(2);
  const CVector psi = SectorAnsatz(a, ctx.space()).prepare(random_parameters(a.n_params, 2, 1.0));
  const int count = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ctx.power_engine().chain(count, psi, ctx.space()));
}
BENCHMARK(BM_PowerChain)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SectorProjector(benchmark::State& st) {
  const auto& ctx = ladder(true);
  const AnsatzCircuit a = ctx.make_ansatz(2);
  const CVector psi = SectorAnsatz(a, ctx.space()).prepare(random_parameters(a.n_params, 3, 1.0));
  for (auto _ : st) benchmark::DoNotOptimize(ctx.projector().apply(psi));
}
BENCHMARK(BM_SectorProjector)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& st) {
  const bool project = st.range(0) != 0;
  const int d = static_cast<int>(st.range(1));
  const auto& ctx = ladder(project);
  const AnsatzCircuit a = ctx.make_ansatz(2);
  const SectorAnsatz sa(a, ctx.space());
  const SubspaceEngine eng(ctx.projector(), ctx.h_sector(), ctx.power_engine(), d);
  const Objective obj(sa, eng);
  const auto theta = random_parameters(a.n_params, 4, 0.05);
  for (auto _ : st) benchmark::DoNotOptimize(obj.evaluate(theta, true).e0);
}
BENCHMARK(BM_Evaluate)
    ->Args({0, 1})
    ->Args({0, 2})
    ->Args({1, 2})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(3);

void BM_Lanczos(benchmark::State& st) {
  const LadderLattice lat(4, 2);
  const PauliSum h = build_hamiltonian(lat, kLab, 1.0, 4.0);
  for (auto _ : st) benchmark::DoNotOptimize(lanczos_ground_state(h).energy);
}
BENCHMARK(BM_Lanczos)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
