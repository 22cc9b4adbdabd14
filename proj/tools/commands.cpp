#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qmdp/errors.hpp"
#include "qmdp/evaluation.hpp"
#include "qmdp/functional_dp.hpp"
#include "qmdp/io.hpp"
#include "qmdp/quantile_solver.hpp"

namespace qmdp::cli {

using nlohmann::json;

std::uint64_t default_seed() {
  const char* env = std::getenv("QMDP_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw ArgumentError(std::string("QMDP_SEED is not an unsigned integer: ") + env);
  }
}

namespace {

std::string format_wealth(const WealthSpace& space, Wealth w) {
  if (space.kind() == WealthKind::Ordinal) return space.classes()[space.class_index(w)];
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", w);
  return buf;
}

json wealth_json(const WealthSpace& space, Wealth w) {
  if (space.kind() == WealthKind::Ordinal) return space.classes()[space.class_index(w)];
  return w;
}

std::optional<int> parse_horizon(const std::string& text) {
  if (text == "inf") return std::nullopt;
  std::size_t used = 0;
  int h = -1;
  try {
    h = std::stoi(text, &used);
  } catch (const std::exception&) {
  }
  if (used != text.size() || h < 0) {
    throw ArgumentError("--horizon expects a nonnegative integer or 'inf', got '" + text + "'");
  }
  return h;
}

Wealth parse_wealth(const WealthSpace& space, const std::string& text) {
  if (space.kind() == WealthKind::Ordinal) return space.class_wealth(space.class_of(text));
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
  }
  if (used == 0 || used != text.size()) throw ArgumentError("not a wealth level: '" + text + "'");
  return x;
}

WealthBounds parse_bounds(const WealthSpace& space, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ArgumentError("--bounds expects lo,hi");
  return {parse_wealth(space, text.substr(0, comma)), parse_wealth(space, text.substr(comma + 1))};
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

void write_problem(const std::string& out, const Mdp& m, const WealthSpace& space) {
  emit(out, problem_to_json({m, space}));
}

std::string horizon_text(const Mdp& m) {
  return m.horizon() ? std::to_string(*m.horizon()) : std::string("inf");
}

}  // namespace

int cmd_generate_garnet(GarnetArgs args) {
  auto& cfg = args.config;
  if (cfg.n_states < 1 || cfg.n_actions < 1) {
    throw ArgumentError("--states and --actions must be positive");
  }
  cfg.branching = args.branching ? *args.branching : log2_branching(cfg.n_states);
  const Mdp m = generate_garnet(cfg);
  write_problem(args.out, m, WealthSpace::additive());
  std::cerr << "garnet G(" << cfg.n_states << "," << cfg.n_actions << "," << cfg.branching
            << ") horizon " << horizon_text(m) << " seed " << cfg.seed << " -> "
            << (args.out.empty() ? "stdout" : args.out) << "\n";
  return 0;
}

int cmd_generate_datacenter(const DataCenterArgs& args) {
  const Mdp m = generate_datacenter(args.config);
  write_problem(args.out, m, WealthSpace::additive());
  std::cerr << "datacenter with " << args.config.n_servers << " servers: " << m.n_states()
            << " states, " << m.n_actions() << " actions, horizon " << horizon_text(m) << " -> "
            << (args.out.empty() ? "stdout" : args.out) << "\n";
  return 0;
}

int cmd_solve(const SolveArgs& args) {
  QuantileQuery q;
  q.tau = args.tau;
  q.criterion = parse_criterion(args.criterion);
  q.epsilon = args.epsilon;
  q.value_iteration.eps_conv = args.eps_conv;
  q.value_iteration.max_sweeps = args.max_sweeps;
  validate(q);

  Problem p = load_problem(args.problem);
  if (!args.horizon.empty()) p.mdp.set_horizon(parse_horizon(args.horizon));
  q.horizon_mode = p.mdp.finite_horizon() ? HorizonMode::Finite : HorizonMode::Infinite;
  if (!args.bounds.empty()) q.quantile_bounds = parse_bounds(p.space, args.bounds);

  const SolveReport report = solve_quantile(p.mdp, p.space, q);
  if (!args.out.empty()) write_file_atomic(args.out, policy_to_json(report.policy));
  if (!args.log.empty()) write_file_atomic(args.log, search_log_csv(report));
  if (!args.dump_values.empty()) {
    const bool strict = q.criterion == QuantileCriterion::Lower;
    const ValueFunction values =
        q.horizon_mode == HorizonMode::Finite
            ? backward_induction(p.mdp, p.space, report.bracket.lo, strict).values
            : value_iteration(p.mdp, p.space, report.bracket.lo, strict, q.value_iteration).values;
    write_file_atomic(args.dump_values, value_function_csv(values));
  }

  std::cout << "quantile_estimate=" << format_wealth(p.space, report.quantile_estimate)
            << " bracket=[" << format_wealth(p.space, report.bracket.lo) << ","
            << format_wealth(p.space, report.bracket.hi) << "]"
            << " iterations=" << report.iterations << " bound=" << report.iteration_bound
            << " extra_solves=" << report.extra_solves
            << (report.at_bottom ? " at_bottom=1" : "") << "\n";
  return 0;
}

namespace {

struct Evaluated {
  WealthDistribution dist;
  bool exact = true;
  std::size_t samples = 0;
};

Evaluated evaluate(const EvalArgs& args, Problem& p) {
  if (args.policy.empty() == !args.standard) {
    throw ArgumentError("pass exactly one of --policy and --standard");
  }
  EvalOptions options;
  options.atom_cap = args.atom_cap;
  if (!args.horizon.empty()) {
    const auto h = parse_horizon(args.horizon);
    if (!h) throw ArgumentError("evaluation needs a finite --horizon");
    options.horizon = h;
  }
  if (!options.horizon && !p.mdp.finite_horizon()) {
    throw ArgumentError("infinite-horizon model: pass --horizon N to evaluate");
  }

  WealthMarkovPolicy pi;
  if (args.standard) {
    if (p.space.kind() == WealthKind::Ordinal) {
      throw ArgumentError("the expectation-optimal policy needs numeric rewards");
    }
    if (options.horizon) p.mdp.set_horizon(options.horizon);
    const double discount = p.space.kind() == WealthKind::Discounted ? p.space.gamma() : 1.0;
    pi = standard_backward_induction(p.mdp, discount).as_policy();
  } else {
    pi = policy_from_json(read_file(args.policy), p.mdp.n_states());
  }

  try {
    return {exact_distribution(p.mdp, p.space, pi, options), true, 0};
  } catch (const ResourceError& e) {
    if (args.exact_only) throw;
    std::cerr << e.what() << "\n";
  }
  if (args.samples < 1) throw ArgumentError("--samples must be positive");
  const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto wealths =
      simulate(p.mdp, p.space, pi, args.samples, args.seed, workers, options.horizon);
  std::vector<Atom> atoms;
  atoms.reserve(wealths.size());
  const double mass = 1.0 / static_cast<double>(wealths.size());
  for (Wealth w : wealths) atoms.push_back({w, mass});
  return {WealthDistribution::from_atoms(std::move(atoms)), false, args.samples};
}

}  // namespace

int cmd_eval(const EvalArgs& args) {
  for (double tau : args.taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ArgumentError("--tau values must lie in [0, 1]");
  }
  Problem p = load_problem(args.problem);
  const Evaluated ev = evaluate(args, p);
  if (!args.csv.empty()) write_file_atomic(args.csv, distribution_csv(ev.dist));

  json summary = {{"method", ev.exact ? "exact" : "monte_carlo"}, {"atoms", ev.dist.size()}};
  if (p.space.is_numeric()) summary["mean"] = ev.dist.mean();
  if (!ev.exact) {
    const double n = static_cast<double>(ev.samples);
    summary["samples"] = ev.samples;
    summary["seed"] = args.seed;
    // Dvoretzky-Kiefer-Wolfowitz band on F at 95% confidence.
    summary["cdf_band_95"] = std::sqrt(std::log(2.0 / 0.05) / (2.0 * n));
  }
  json quantiles = json::array();
  for (double tau : args.taus) {
    json entry = {{"tau", tau}};
    entry["lower"] = tau > 0.0 ? wealth_json(p.space, quantile(ev.dist, tau, QuantileCriterion::Lower))
                               : json(nullptr);
    entry["upper"] = tau < 1.0 ? wealth_json(p.space, quantile(ev.dist, tau, QuantileCriterion::Upper))
                               : json(nullptr);
    quantiles.push_back(std::move(entry));
  }
  summary["quantiles"] = std::move(quantiles);
  emit(args.summary, summary.dump(1) + "\n");
  return 0;
}

int cmd_dist(const EvalArgs& args) {
  Problem p = load_problem(args.problem);
  const Evaluated ev = evaluate(args, p);
  emit(args.csv, distribution_csv(ev.dist));
  return 0;
}

namespace {

double time_once(const Mdp& m, const BenchArgs& args) {
  const WealthSpace space = WealthSpace::additive();
  const auto start = std::chrono::steady_clock::now();
  if (args.mode == "solve") {
    QuantileQuery q;
    q.tau = args.tau;
    q.epsilon = args.epsilon;
    solve_quantile(m, space, q);
  } else {
    const WealthBounds b = wealth_bounds(m, space);
    DpOptions options;
    options.keep_values = false;
    backward_induction(m, space, b.lo + (b.hi - b.lo) / 2.0, true, options);
  }
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double denom = xs.size() > 1 ? static_cast<double>(xs.size() - 1) : 1.0;
  return {mean, std::sqrt(var / denom)};
}

}  // namespace

int cmd_bench(const BenchArgs& args) {
  if (args.reps < 1) throw ArgumentError("--reps must be positive");
  if (args.mode != "bi" && args.mode != "solve") throw ArgumentError("--mode is bi or solve");
  std::ostringstream csv;
  const bool garnet = args.family == "garnet";
  const std::vector<int>& grid = garnet ? args.states : args.horizons;
  csv << (garnet ? "n_states" : "horizon") << ",mean_seconds,std_seconds\n";
  for (int point : grid) {
    if (point < 1) throw ArgumentError("grid values must be positive");
    std::vector<double> times;
    for (int r = 0; r < args.reps; ++r) {
      Mdp m;
      if (garnet) {
        GarnetConfig cfg;
        cfg.n_states = point;
        cfg.n_actions = args.actions;
        cfg.branching = log2_branching(point);
        cfg.horizon = args.horizon;
        cfg.seed = args.seed + static_cast<std::uint64_t>(r);
        m = generate_garnet(cfg);
      } else {
        DataCenterConfig cfg;
        cfg.n_servers = args.servers;
        cfg.horizon = point;
        cfg.seed = args.seed + static_cast<std::uint64_t>(r);
        m = generate_datacenter(cfg);
      }
      times.push_back(time_once(m, args));
    }
    const auto [mean, sd] = mean_std(times);
    csv << point << ',' << mean << ',' << sd << '\n';
    std::cerr << (garnet ? "n_states=" : "horizon=") << point << " mean=" << mean << "s\n";
  }
  emit(args.out, csv.str());
  return 0;
}

int cmd_oracle_check(const OracleArgs& args) {
  if (args.instances < 1) throw ArgumentError("--instances must be positive");
  const WealthSpace space = WealthSpace::additive();
  int runs = 0;
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < args.instances; ++i) {
    GarnetConfig cfg;
    cfg.n_states = 4;
    cfg.n_actions = 2;
    cfg.branching = 2;
    cfg.horizon = 3;
    cfg.seed = args.seed + static_cast<std::uint64_t>(i);
    const Mdp m = generate_garnet(cfg);
    for (auto criterion : {QuantileCriterion::Lower, QuantileCriterion::Upper}) {
      for (double tau : {0.1, 0.5, 0.9}) {
        QuantileQuery q;
        q.tau = tau;
        q.criterion = criterion;
        q.epsilon = 1e-6;
        const SolveReport report = solve_quantile(m, space, q);
        const OracleResult oracle = brute_force_optimal_quantile(m, space, tau, criterion);
        const double gap = std::abs(report.quantile_estimate - oracle.quantile);
        const bool ok = gap <= q.epsilon && quantile_certificate(m, space, report, q) &&
                        report.iterations <= report.iteration_bound;
        worst = std::max(worst, gap);
        ++runs;
        if (!ok) {
          ++failures;
          std::cerr << "mismatch: seed " << cfg.seed << " " << to_string(criterion) << " tau "
                    << tau << " solver " << report.quantile_estimate << " oracle "
                    << oracle.quantile << "\n";
        }
      }
    }
  }
  std::cout << "oracle-check: " << runs << " runs, " << failures
            << " failures, largest gap " << worst << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace qmdp::cli
