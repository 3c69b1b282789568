#include <benchmark/benchmark.h>

#include "parikh/automaton.hpp"
#include "parikh/generators.hpp"
#include "parikh/reminder_graph.hpp"
#include "parikh/treewidth.hpp"
#include "parikh/verify.hpp"

namespace {

void BM_BuildGn(benchmark::State& state) {
  const parikh::Grammar g = parikh::gen_gn(static_cast<int>(state.range(0)));
  std::size_t states = 0;
  for (auto _ : state) {
    const parikh::Nfa a = parikh::build(g);
    states = a.states.size();
    benchmark::DoNotOptimize(states);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_BuildGn)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

void BM_ExactWidthGn(benchmark::State& state) {
  const parikh::ReminderGraph rg = parikh::build_reminder_graph(parikh::gen_gn(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parikh::exact_treewidth(rg.graph).width);
  }
}
BENCHMARK(BM_ExactWidthGn)->DenseRange(4, 14, 2);

void BM_HeuristicWidthPorts(benchmark::State& state) {
  const parikh::ReminderGraph rg = parikh::build_reminder_graph(parikh::gen_ports(static_cast<int>(state.range(0)), 3, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parikh::heuristic_treewidth(rg.graph).width);
  }
}
BENCHMARK(BM_HeuristicWidthPorts)->RangeMultiplier(4)->Range(16, 1024);

void BM_VerifyAnBn(benchmark::State& state) {
  const parikh::Grammar g = parikh::parse_grammar("start: S\nS -> a S b | S S | _eps_\n");
  const parikh::Nfa a = parikh::build(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parikh::verify_parikh_equivalence(g, static_cast<int>(state.range(0)), &a).verdict);
  }
}
BENCHMARK(BM_VerifyAnBn)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
