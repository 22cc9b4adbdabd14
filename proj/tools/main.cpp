#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qmdp/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kInvalid = 3, kResource = 4, kNoConvergence = 5 };

}  // namespace

int main(int argc, char** argv) {
  using namespace qmdp::cli;

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const qmdp::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Quantile-optimal policies for finite MDPs"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* generate = app.add_subcommand("generate", "Write a generated problem file");
  generate->require_subcommand(1);

  GarnetArgs garnet;
  garnet.config.seed = seed;
  int garnet_horizon = 5;
  auto* g = generate->add_subcommand("garnet", "Random Garnet MDP G(states, actions, branching)");
  g->add_option("--states", garnet.config.n_states, "Number of states")->required();
  g->add_option("--actions", garnet.config.n_actions, "Number of actions")->required();
  g->add_option("--branching", garnet.branching, "Successors per state-action (default ceil(log2 states))");
  g->add_option("--reward-low", garnet.config.reward_low, "Smallest reward");
  g->add_option("--reward-high", garnet.config.reward_high, "Largest reward");
  g->add_option("--skew", garnet.config.skew, "Reward skew exponent; 1 is uniform")
      ->check(CLI::PositiveNumber);
  g->add_option("--horizon", garnet_horizon, "Horizon")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", garnet.config.seed, "Seed (default QMDP_SEED or 0)");
  g->add_option("--out", garnet.out, "Output problem file (default stdout)");
  g->callback([&] {
    garnet.config.horizon = garnet_horizon;
    action = [&] { return cmd_generate_garnet(garnet); };
  });

  DataCenterArgs dc;
  dc.config.seed = seed;
  int dc_horizon = 5;
  auto* d = generate->add_subcommand("datacenter", "Server provisioning model");
  d->add_option("--servers", dc.config.n_servers, "Number of servers")->required()
      ->check(CLI::PositiveNumber);
  d->add_option("--alpha", dc.config.power_cost, "Cost per active server");
  d->add_option("--beta", dc.config.qos_cost, "Cost per unserved job");
  d->add_option("--kappa", dc.config.jobs_per_server, "Jobs served per server and step");
  d->add_option("--horizon", dc_horizon, "Horizon")->check(CLI::NonNegativeNumber);
  d->add_option("--seed", dc.config.seed, "Seed (default QMDP_SEED or 0)");
  d->add_option("--out", dc.out, "Output problem file (default stdout)");
  d->callback([&] {
    dc.config.horizon = dc_horizon;
    action = [&] { return cmd_generate_datacenter(dc); };
  });

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Search for a quantile-optimal policy");
  s->add_option("problem", solve.problem, "Problem file")->required();
  s->add_option("--tau", solve.tau, "Quantile level")->required();
  s->add_option("--epsilon", solve.epsilon, "Target bracket width");
  s->add_option("--criterion", solve.criterion, "lower or upper")
      ->check(CLI::IsMember({"lower", "upper"}));
  s->add_option("--horizon", solve.horizon, "Override the horizon: N or inf");
  s->add_option("--bounds", solve.bounds, "Initial bracket lo,hi");
  s->add_option("--out", solve.out, "Policy JSON output");
  s->add_option("--log", solve.log, "Search log CSV output");
  s->add_option("--dump-values", solve.dump_values, "Value function CSV at the final threshold");
  s->add_option("--eps-conv", solve.eps_conv, "Value iteration tolerance");
  s->add_option("--max-sweeps", solve.max_sweeps, "Value iteration sweep budget");
  s->callback([&] { action = [&] { return cmd_solve(solve); }; });

  EvalArgs eval;
  eval.seed = seed;
  auto add_eval_options = [&](CLI::App* cmd) {
    cmd->add_option("problem", eval.problem, "Problem file")->required();
    cmd->add_option("--policy", eval.policy, "Policy JSON");
    cmd->add_flag("--standard", eval.standard, "Use the expectation-optimal policy");
    cmd->add_option("--horizon", eval.horizon, "Evaluation horizon");
    cmd->add_option("--samples", eval.samples, "Monte Carlo episodes beyond the atom cap");
    cmd->add_option("--atom-cap", eval.atom_cap, "Largest exact evaluation");
    cmd->add_flag("--exact", eval.exact_only, "Fail instead of falling back to Monte Carlo");
    cmd->add_option("--seed", eval.seed, "Monte Carlo seed (default QMDP_SEED or 0)");
  };
  auto* e = app.add_subcommand("eval", "Terminal wealth distribution and quantiles of a policy");
  add_eval_options(e);
  e->add_option("--tau", eval.taus, "Quantile levels")->delimiter(',');
  e->add_option("--csv", eval.csv, "Distribution CSV output");
  e->add_option("--summary", eval.summary, "Summary JSON output (default stdout)");
  e->callback([&] { action = [&] { return cmd_eval(eval); }; });

  auto* dist = app.add_subcommand("dist", "Distribution CSV of a policy");
  add_eval_options(dist);
  dist->add_option("--out", eval.csv, "CSV output (default stdout)");
  dist->callback([&] { action = [&] { return cmd_dist(eval); }; });

  BenchArgs bench;
  bench.seed = seed;
  auto* b = app.add_subcommand("bench", "Time backward induction over a grid");
  b->add_option("family", bench.family, "garnet or datacenter")
      ->check(CLI::IsMember({"garnet", "datacenter"}));
  b->add_option("--states", bench.states, "Garnet state sizes")->delimiter(',');
  b->add_option("--actions", bench.actions, "Garnet actions");
  b->add_option("--servers", bench.servers, "Data-center servers");
  b->add_option("--horizons", bench.horizons, "Data-center horizons")->delimiter(',');
  b->add_option("--horizon", bench.horizon, "Garnet horizon");
  b->add_option("--reps", bench.reps, "Repetitions per grid point");
  b->add_option("--mode", bench.mode, "bi (one backward induction) or solve (full search)")
      ->check(CLI::IsMember({"bi", "solve"}));
  b->add_option("--tau", bench.tau, "Quantile level in solve mode");
  b->add_option("--epsilon", bench.epsilon, "Bracket width in solve mode");
  b->add_option("--seed", bench.seed, "Base seed (default QMDP_SEED or 0)");
  b->add_option("--out", bench.out, "CSV output (default stdout)");
  b->callback([&] { action = [&] { return cmd_bench(bench); }; });

  OracleArgs oracle;
  oracle.seed = seed;
  auto* o = app.add_subcommand("oracle-check", "Compare the solver against exhaustive search");
  o->add_option("--instances", oracle.instances, "Number of G(4,2,2) instances");
  o->add_option("--seed", oracle.seed, "Base seed (default QMDP_SEED or 0)");
  o->callback([&] { action = [&] { return cmd_oracle_check(oracle); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const qmdp::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const qmdp::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const qmdp::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNoConvergence;
  } catch (const qmdp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
