#include <benchmark/benchmark.h>

#include <string>

#include "asp/decide.hpp"
#include "asp/eqsys.hpp"
#include "asp/measure.hpp"
#include "asp/ppda.hpp"
#include "asp/semantics.hpp"
#include "asp/syntax.hpp"

namespace {

// (a : s) (+ 1/2) tail^k(s): k + 4 automaton states, measure 1/2 - k/2.
asp::Definition tail_tower(int k) {
  std::string body = "s";
  for (int i = 0; i < k; ++i) body = "tail(" + body + ")";
  return asp::parse_file("stream s = (a : s) (+ 1/2) " + body + "\n").front();
}

asp::Definition tree_e2() {
  return asp::parse_file("tree t = left(t) (+ 1/4) mk(x, t, left(t))\n").front();
}

void BM_Measure(benchmark::State& state) {
  const auto d = tail_tower(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(asp::measure(d));
}
BENCHMARK(BM_Measure)->Arg(1)->Arg(16)->Arg(64);

void BM_TranslateAndBuild(benchmark::State& state) {
  const auto d = tail_tower(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto p = asp::translate(d);
    benchmark::DoNotOptimize(asp::clean(asp::build_system(p)));
  }
}
BENCHMARK(BM_TranslateAndBuild)->Arg(1)->Arg(8)->Arg(32);

void BM_Newton(benchmark::State& state) {
  const auto s = asp::clean(asp::build_system(asp::translate(tail_tower(static_cast<int>(state.range(0)))))).system;
  for (auto _ : state) benchmark::DoNotOptimize(asp::newton_solve(s, 1e-12));
}
BENCHMARK(BM_Newton)->Arg(1)->Arg(8)->Arg(32);

void BM_Kleene(benchmark::State& state) {
  const auto s = asp::clean(asp::build_system(asp::translate(tail_tower(static_cast<int>(state.range(0)))))).system;
  for (auto _ : state) benchmark::DoNotOptimize(asp::kleene_solve(s, 1e-9, 100000));
}
BENCHMARK(BM_Kleene)->Arg(1)->Arg(8);

void BM_DecideExact(benchmark::State& state) {
  const auto d = tail_tower(static_cast<int>(state.range(0)));
  asp::DecideConfig cfg;
  cfg.tier3 = false;
  for (auto _ : state) benchmark::DoNotOptimize(asp::decide_asp(d, cfg));
}
BENCHMARK(BM_DecideExact)->Arg(1)->Arg(8)->Arg(32);

void BM_DecideTree(benchmark::State& state) {
  const auto d = tree_e2();
  asp::DecideConfig cfg;
  cfg.tier3 = false;
  for (auto _ : state) benchmark::DoNotOptimize(asp::decide_asp(d, cfg));
}
BENCHMARK(BM_DecideTree);

void BM_PrefixDistribution(benchmark::State& state) {
  const auto d = tail_tower(1);
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(asp::prefix_distribution(d, depth));
}
BENCHMARK(BM_PrefixDistribution)->Arg(4)->Arg(8)->Arg(12);

void BM_MonteCarlo(benchmark::State& state) {
  const auto d = tree_e2();
  asp::McConfig cfg;
  cfg.runs = 16;
  cfg.horizon = static_cast<std::size_t>(state.range(0));
  cfg.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(asp::monte_carlo(d, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.runs * cfg.horizon));
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
