#include <benchmark/benchmark.h>

#include <vector>

#include "qmdp/evaluation.hpp"
#include "qmdp/functional_dp.hpp"
#include "qmdp/generators.hpp"
#include "qmdp/quantile_solver.hpp"
#include "qmdp/step_function.hpp"

namespace {

using namespace qmdp;

Mdp garnet(int n_states, int horizon = 5) {
  GarnetConfig cfg;
  cfg.n_states = n_states;
  cfg.n_actions = 5;
  cfg.branching = log2_branching(n_states);
  cfg.horizon = horizon;
  cfg.seed = 7;
  return generate_garnet(cfg);
}

void BM_BackwardInductionGarnet(benchmark::State& state) {
  const Mdp m = garnet(static_cast<int>(state.range(0)));
  const WealthSpace space = WealthSpace::additive();
  const WealthBounds b = wealth_bounds(m, space);
  DpOptions options;
  options.keep_values = false;
  for (auto _ : state) {
    auto r = backward_induction(m, space, b.lo + (b.hi - b.lo) / 2.0, true, options);
    benchmark::DoNotOptimize(r.probability);
  }
}
BENCHMARK(BM_BackwardInductionGarnet)->Arg(50)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_SolveQuantileGarnet(benchmark::State& state) {
  const Mdp m = garnet(static_cast<int>(state.range(0)));
  const WealthSpace space = WealthSpace::additive();
  QuantileQuery q;
  q.tau = 0.1;
  q.epsilon = 1e-3;
  for (auto _ : state) {
    auto r = solve_quantile(m, space, q);
    benchmark::DoNotOptimize(r.quantile_estimate);
  }
}
BENCHMARK(BM_SolveQuantileGarnet)->Arg(50)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_BackwardInductionDataCenter(benchmark::State& state) {
  DataCenterConfig cfg;
  cfg.n_servers = 10;
  cfg.horizon = static_cast<int>(state.range(0));
  const Mdp m = generate_datacenter(cfg);
  const WealthSpace space = WealthSpace::additive();
  const WealthBounds b = wealth_bounds(m, space);
  DpOptions options;
  options.keep_values = false;
  for (auto _ : state) {
    auto r = backward_induction(m, space, b.lo + (b.hi - b.lo) / 2.0, true, options);
    benchmark::DoNotOptimize(r.probability);
  }
}
BENCHMARK(BM_BackwardInductionDataCenter)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_ExactDistributionGarnet(benchmark::State& state) {
  const Mdp m = garnet(static_cast<int>(state.range(0)));
  const WealthMarkovPolicy pi = standard_backward_induction(m).as_policy();
  const WealthSpace space = WealthSpace::additive();
  for (auto _ : state) {
    auto d = exact_distribution(m, space, pi);
    benchmark::DoNotOptimize(d.size());
  }
}
BENCHMARK(BM_ExactDistributionGarnet)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CombineStepFunctions(benchmark::State& state) {
  const int pieces = static_cast<int>(state.range(0));
  std::vector<StepFunction> fs;
  for (int k = 0; k < 8; ++k) {
    std::vector<Step> steps;
    for (int i = 0; i < pieces; ++i) {
      steps.push_back({0.37 * i + 0.011 * k, (i + k) % 2 == 0, (i + 1.0) / (pieces + 1.0)});
    }
    fs.emplace_back(0.0, std::move(steps));
  }
  std::vector<WeightedTerm> terms;
  for (const auto& f : fs) terms.push_back({1.0 / 8.0, &f, 0.0});
  for (auto _ : state) {
    auto g = combine(terms);
    benchmark::DoNotOptimize(g.piece_count());
  }
}
BENCHMARK(BM_CombineStepFunctions)->Arg(16)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
