#include <benchmark/benchmark.h>

#include "qoinet/lp.hpp"
#include "qoinet/oracle.hpp"
#include "qoinet/sampling.hpp"
#include "qoinet/scenario_io.hpp"
#include "qoinet/simulator.hpp"

using namespace qoinet;

namespace {

Scenario two_device() {
  return parse_scenario_text(two_device_scenario_text(), "<builtin>");
}

LpInstance table1() {
  LpInstance inst;
  inst.num_vars = 2;
  inst.num_cons = 3;
  inst.c = {2.0, 1.0};
  inst.b = {4.0, 15.0, 2.5};
  inst.x_max = {10.0, 10.0};
  inst.a = {1, 1, 5, 3, 1, 0};
  return inst;
}

void BM_sample_slot(benchmark::State& state) {
  Scenario sc = two_device();
  std::uint64_t slot = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_slot(sc, 1, slot++));
}
BENCHMARK(BM_sample_slot);

void BM_decide(benchmark::State& state) {
  Scenario sc = two_device();
  PolicyKind kind = state.range(0) == 0 ? PolicyKind::Quadratic
                                        : PolicyKind::MaxWeight;
  QueueVector st = QueueVector::zeros(2);
  st.K = {120, 40};
  st.Q = {30, 10};
  st.J = {25, 5};
  SlotRealization slot = sample_slot(sc, 1, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(decide(kind, sc, st, slot, 800.0));
}
BENCHMARK(BM_decide)->Arg(0)->Arg(1);

void BM_run_slots(benchmark::State& state) {
  Scenario sc = two_device();
  RunOptions opts;
  opts.horizon_override = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(run(sc, PolicyKind::Quadratic, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_slots)->Arg(1000)->Arg(10000);

void BM_lp_step(benchmark::State& state) {
  LpInstance inst = table1();
  LpSolverState st = LpSolverState::initial(inst, 200.0);
  for (auto _ : state) {
    lp_step_quadratic(st, inst);
    benchmark::DoNotOptimize(st.Z.data());
  }
}
BENCHMARK(BM_lp_step);

void BM_oracle_joint_decision(benchmark::State& state) {
  SplitMix64 rng(5);
  Scenario sc = random_small_scenario(rng, 2, 3, 3, 3);
  QueueVector st = random_queues(rng, 2, 12);
  SlotRealization slot = sample_slot(sc, 2, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_joint_decision(sc, st, slot, 800.0));
}
BENCHMARK(BM_oracle_joint_decision);

}  // namespace

BENCHMARK_MAIN();
