#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "instances.hpp"
#include "qmdp/distribution.hpp"
#include "qmdp/errors.hpp"
#include "qmdp/evaluation.hpp"
#include "qmdp/functional_dp.hpp"
#include "qmdp/generators.hpp"
#include "qmdp/quantile_solver.hpp"

using namespace qmdp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

WealthMarkovPolicy markov(std::vector<std::vector<int>> actions) {
  std::vector<std::vector<DecisionRule>> rules;
  for (const auto& layer : actions) {
    auto& out = rules.emplace_back();
    for (int a : layer) out.emplace_back(a);
  }
  return WealthMarkovPolicy(std::move(rules), false);
}

WealthMarkovPolicy stationary(std::vector<int> actions) {
  std::vector<std::vector<DecisionRule>> rules(1);
  for (int a : actions) rules[0].emplace_back(a);
  return WealthMarkovPolicy(std::move(rules), true);
}

QuantileQuery query(double tau, QuantileCriterion c, double epsilon) {
  QuantileQuery q;
  q.tau = tau;
  q.criterion = c;
  q.epsilon = epsilon;
  return q;
}

Mdp garnet(int n, int actions, int branching, int horizon, std::uint64_t seed, double skew = 1.0) {
  GarnetConfig cfg;
  cfg.n_states = n;
  cfg.n_actions = actions;
  cfg.branching = branching;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.skew = skew;
  return generate_garnet(cfg);
}

Outcome example_quantiles() {
  Outcome o;
  const auto space = WealthSpace::ordinal({"w1", "w2", "w3"}, {"up"}, {{1}, {2}, {2}});
  const auto d = WealthDistribution::from_atoms({{0, 0.5}, {1, 0.2}, {2, 0.3}});
  const Wealth lower = quantile(d, 0.5, QuantileCriterion::Lower);
  const Wealth upper = quantile(d, 0.5, QuantileCriterion::Upper);
  o.require(lower == 0.0 && upper == 1.0, "quantiles differ from (w1, w2)");
  o.require(oracle::quantile_of({{0, 0.5}, {1, 0.2}, {2, 0.3}}, 0.5, QuantileCriterion::Lower) == 0.0 &&
                oracle::quantile_of({{0, 0.5}, {1, 0.2}, {2, 0.3}}, 0.5, QuantileCriterion::Upper) == 1.0,
            "reference definitions disagree");
  o.detail = fmt("lower=%s upper=%s", space.classes()[static_cast<int>(lower)].c_str(),
                 space.classes()[static_cast<int>(upper)].c_str()) +
             (o.pass ? "" : " " + o.detail);
  return o;
}

Outcome counterexample() {
  Outcome o;
  const Mdp m = instances::two_state_counterexample(2);
  const auto space = WealthSpace::discounted(0.9);
  auto q95 = [&](const WealthMarkovPolicy& pi) {
    return quantile(exact_distribution(m, space, pi), 0.95, QuantileCriterion::Lower);
  };
  const double q1 = q95(stationary({0, 0}));
  const double q2 = q95(stationary({1, 0}));
  const double q12 = q95(markov({{0, 0}, {1, 0}}));
  o.require(std::abs(q1 - 0.1) <= 1e-12, "always a1 is not 0.1");
  o.require(std::abs(q2 - 1.0) <= 1e-12, "always a2 is not 1");
  o.require(std::abs(q12 - 1.9) <= 1e-12, "a1 then a2 is not 1.9");
  double best_stationary = -1e9;
  for (int a0 = 0; a0 < m.n_actions(); ++a0) {
    for (int a1 = 0; a1 < m.n_actions(); ++a1) {
      best_stationary = std::max(best_stationary, q95(stationary({a0, a1})));
    }
  }
  o.require(best_stationary < 1.9 - 1e-9, "a stationary policy reaches 1.9");
  const std::string detail = fmt("q(a1)=%.12g q(a2)=%.12g q(a1,a2)=%.12g best stationary=%.12g",
                                 q1, q2, q12, best_stationary);
  o.detail = o.pass ? detail : o.detail + "; " + detail;
  return o;
}

Outcome prec_correction() {
  Outcome o;
  const auto c = instances::prec_correction_case();
  const auto q = query(0.5, QuantileCriterion::Lower, 1.0);
  const auto r = solve_quantile(c.mdp, c.space, q);
  const Wealth own = quantile(exact_distribution(c.mdp, c.space, r.policy), 0.5, QuantileCriterion::Lower);
  o.require(r.quantile_estimate == 1.0, "optimal quantile is not w2");
  o.require(own == 1.0, "returned policy's own quantile is not w2");
  o.require(oracle::optimal_quantile(c.mdp, c.space, 0.5, QuantileCriterion::Lower, 1) == 1.0,
            "reference optimum is not w2");
  const std::string detail = fmt("estimate=%s policy quantile=%s",
                                 c.space.classes()[static_cast<int>(r.quantile_estimate)].c_str(),
                                 c.space.classes()[static_cast<int>(own)].c_str());
  o.detail = o.pass ? detail : o.detail + "; " + detail;
  return o;
}

struct OracleRuns {
  int runs = 0;
  int mismatches = 0;
  int certificate_failures = 0;
  int bound_violations = 0;
  int max_iterations = 0;
  double max_gap = 0.0;
};

OracleRuns oracle_equivalence() {
  OracleRuns out;
  const auto space = WealthSpace::additive();
  constexpr double eps = 1e-6;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Mdp m = garnet(4, 2, 2, 3, 7000 + seed);
    for (auto c : {QuantileCriterion::Lower, QuantileCriterion::Upper}) {
      for (double tau : {0.1, 0.5, 0.9}) {
        const auto q = query(tau, c, eps);
        const auto r = solve_quantile(m, space, q);
        const Wealth brute = brute_force_optimal_quantile(m, space, tau, c).quantile;
        const Wealth reference = oracle::optimal_quantile(m, space, tau, c, 3);
        const double gap = std::abs(r.quantile_estimate - brute);
        out.max_gap = std::max(out.max_gap, gap);
        if (gap > eps || std::abs(brute - reference) > 1e-9) ++out.mismatches;
        if (!quantile_certificate(m, space, r, q)) ++out.certificate_failures;
        const auto bracket = wealth_bounds(m, space);
        const int bound = static_cast<int>(std::ceil(std::log2((bracket.hi - bracket.lo) / eps)));
        if (r.iterations > std::max(bound, 0)) ++out.bound_violations;
        out.max_iterations = std::max(out.max_iterations, r.iterations);
        ++out.runs;
      }
    }
  }
  return out;
}

Outcome criterion_oracle(const OracleRuns& r) {
  Outcome o;
  o.require(r.runs == 600, "wrong run count");
  o.require(r.mismatches == 0, "solver and brute force disagree");
  o.require(r.certificate_failures == 0, "certificate failed");
  o.detail = fmt("%d runs, %d mismatches, %d certificate failures, max gap %.3g", r.runs,
                 r.mismatches, r.certificate_failures, r.max_gap);
  return o;
}

Outcome criterion_bound(const OracleRuns& numeric) {
  Outcome o;
  o.require(numeric.bound_violations == 0, "numeric bound exceeded");
  std::mt19937_64 rng(11);
  int runs = 0, violations = 0, wrong = 0, max_iterations = 0;
  for (int i = 0; i < 120; ++i) {
    const int classes = 2 + static_cast<int>(rng() % 7);
    const int labels = 2 + static_cast<int>(rng() % 3);
    std::vector<std::string> names, label_names;
    for (int k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
    for (int l = 0; l < labels; ++l) label_names.push_back("l" + std::to_string(l));
    std::vector<std::vector<int>> table(static_cast<std::size_t>(classes));
    for (auto& row : table) {
      for (int l = 0; l < labels; ++l) row.push_back(static_cast<int>(rng() % classes));
    }
    const auto space = WealthSpace::ordinal(names, label_names, table, 0);
    instances::RandomMdpSpec spec;
    spec.n_states = 3;
    spec.reward_low = 0;
    spec.reward_high = labels - 1;
    spec.reward_levels = labels;
    spec.horizon = 2;
    const Mdp m = instances::random_mdp(rng, spec);
    const int bound = static_cast<int>(std::ceil(std::log2(classes)));
    for (auto c : {QuantileCriterion::Lower, QuantileCriterion::Upper}) {
      for (double tau : {0.25, 0.5, 0.75}) {
        const auto r = solve_quantile(m, space, query(tau, c, 1.0));
        if (r.iterations > bound) ++violations;
        if (r.quantile_estimate != oracle::optimal_quantile(m, space, tau, c, 2)) ++wrong;
        max_iterations = std::max(max_iterations, r.iterations);
        ++runs;
      }
    }
  }
  o.require(violations == 0, "ordinal bound exceeded");
  o.require(wrong == 0, "ordinal optimum differs from reference");
  o.detail = fmt("numeric: %d runs, max iterations %d, %d violations; ordinal: %d runs, max "
                 "iterations %d, %d violations, %d wrong optima",
                 numeric.runs, numeric.max_iterations, numeric.bound_violations, runs,
                 max_iterations, violations, wrong);
  return o;
}

Outcome quantile_vs_standard() {
  Outcome o;
  const auto space = WealthSpace::additive();
  const Mdp m = garnet(100, 5, 7, 5, 1, 4.0);
  const auto r = solve_quantile(m, space, query(0.1, QuantileCriterion::Lower, 1e-3));
  const auto dq = exact_distribution(m, space, r.policy);
  const auto ds = exact_distribution(m, space, standard_backward_induction(m).as_policy());
  const double qq = quantile(dq, 0.1, QuantileCriterion::Lower);
  const double qs = quantile(ds, 0.1, QuantileCriterion::Lower);
  const double mq = dq.mean(), ms = ds.mean();
  o.require(qq >= qs - 1e-12, "quantile policy has a lower 0.1-quantile");
  o.require(ms >= mq - 1e-12, "standard policy has a lower mean");
  o.require(qq > qs + 1e-12 || ms > mq + 1e-12, "no strict inequality");
  o.detail = fmt("q0.1: quantile policy %.6g vs standard %.6g; mean: quantile policy %.6g vs "
                 "standard %.6g",
                 qq, qs, mq, ms);
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  const auto space = WealthSpace::additive();
  std::mt19937_64 rng(23);
  constexpr std::size_t n = 100000;
  double worst_ratio = 0.0;
  std::string ps;
  for (int i = 0; i < 10; ++i) {
    const Mdp m = garnet(10, 3, 3, 4, 300 + i, 1.0 + i % 3);
    const auto support = oracle::reachable_terminal_wealth(m, space, 4);
    Wealth w = 0.0;
    bool strict = false;
    DpResult dp;
    // Redraw until the target is informative: p = 0 or 1 has an empty band.
    do {
      w = support[rng() % support.size()];
      strict = (rng() & 1) != 0;
      dp = backward_induction(m, space, w, strict);
    } while (dp.probability < 0.02 || dp.probability > 0.98);
    const auto sample = simulate(m, space, dp.policy, n, 1000 + i, 4);
    const auto hits = std::count_if(sample.begin(), sample.end(),
                                    [&](Wealth x) { return oracle::beyond(x, w, strict); });
    const double freq = static_cast<double>(hits) / n;
    const double band = 3.0 * std::sqrt(dp.probability * (1.0 - dp.probability) / n);
    const double gap = std::abs(freq - dp.probability);
    o.require(gap <= band + 1e-12, fmt("pair %d: |%.6g - %.6g| > %.3g", i, freq, dp.probability, band));
    worst_ratio = std::max(worst_ratio, gap / band);
    ps += fmt("%s%.3f", ps.empty() ? "" : ",", dp.probability);
  }
  o.detail = (o.pass ? "" : o.detail + "; ") + fmt("p in {%s}, largest gap / band = %.3f", ps.c_str(), worst_ratio);
  return o;
}

Outcome truncation() {
  Outcome o;
  const auto space = WealthSpace::additive();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> target(-4.0, -0.2);
  double max_gap = 0.0;
  int max_sweeps = 0;
  double p_lo = 1.0, p_hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Mdp m = instances::random_nonpositive_mdp(rng, 5);
    const Wealth w = target(rng);
    const bool strict = (i % 2) == 0;
    ValueIterationOptions options;
    options.eps_conv = 1e-6;
    const auto vi = value_iteration(m, space, w, strict, options);
    Mdp truncated = m;
    truncated.set_horizon(200);
    DpOptions dp;
    dp.keep_values = false;
    const auto bi = backward_induction(truncated, space, w, strict, dp);
    const double gap = std::abs(vi.probability - bi.probability);
    max_gap = std::max(max_gap, gap);
    max_sweeps = std::max(max_sweeps, vi.sweeps);
    p_lo = std::min(p_lo, vi.probability);
    p_hi = std::max(p_hi, vi.probability);
    o.require(gap <= 1e-6, fmt("instance %d: |%.9g - %.9g|", i, vi.probability, bi.probability));
    o.require(vi.policy.stationary(), fmt("instance %d: policy not stationary", i));
  }
  o.detail = (o.pass ? "" : o.detail + "; ") +
             fmt("p in [%.3f, %.3f], max |VI - BI200| = %.3g, max sweeps %d", p_lo, p_hi, max_gap,
                 max_sweeps);
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome scaling() {
  Outcome o;
  const auto space = WealthSpace::additive();
  std::string timings;
  double big = 0.0;
  for (int n : {50, 100, 250}) {
    const Mdp m = garnet(n, 5, log2_branching(n), 5, 9);
    const auto start = std::chrono::steady_clock::now();
    const auto r = solve_quantile(m, space, query(0.1, QuantileCriterion::Lower, 1e-3));
    const double elapsed = seconds_since(start);
    timings += fmt(" n=%d: %.2fs (%d iterations)", n, elapsed, r.iterations);
    if (n == 250) big = elapsed;
  }
  o.require(big < 600.0, "G(250,5,8) solve exceeded 10 minutes");
  o.detail = "solve times" + timings;
  return o;
}

Outcome invariants() {
  Outcome o;
  constexpr int kCases = 1000;
  std::mt19937_64 rng(97);
  std::vector<double> grid;
  for (int k = -80; k <= 80; ++k) grid.push_back(0.0625 * k);
  grid.push_back(-1e6);
  grid.push_back(1e6);
  const auto space = WealthSpace::additive();
  int failures[8] = {};

  for (int i = 0; i < kCases; ++i) {
    const auto f = instances::random_step_function(rng, 6, false);
    const double r = 0.25 * static_cast<int>(rng() % 9) - 1.0;
    const auto g = shift(f, r, 0, space);
    for (double x : grid) {
      if (std::abs(oracle::step_value(g, x) - oracle::step_value(f, x + r)) > 1e-12) {
        ++failures[0];
        break;
      }
    }
  }
  for (int i = 0; i < kCases; ++i) {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<StepFunction> fs;
    std::vector<double> weights;
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      fs.push_back(instances::random_step_function(rng, 5, false));
      weights.push_back(0.1 + static_cast<double>(rng() % 100) / 100.0);
      total += weights.back();
    }
    std::vector<WeightedTerm> terms;
    for (int j = 0; j < k; ++j) terms.push_back({weights[j] / total, &fs[j], 0.25 * (j % 3)});
    const auto h = combine(terms);
    const auto env = pointwise_max(fs);
    for (double x : grid) {
      double expected = 0.0, best = -1.0;
      for (int j = 0; j < k; ++j) {
        expected += weights[j] / total * oracle::step_value(fs[j], x + 0.25 * (j % 3));
        best = std::max(best, oracle::step_value(fs[j], x));
      }
      if (std::abs(oracle::step_value(h, x) - expected) > 1e-12) {
        ++failures[1];
        break;
      }
      const int a = env.argmax.action_at(x);
      if (std::abs(oracle::step_value(env.value, x) - best) > 1e-12 ||
          std::abs(oracle::step_value(fs[a], x) - best) > 1e-12) {
        ++failures[2];
        break;
      }
    }
    double sup = 0.0;
    const auto& other = fs[k - 1];
    for (double x : grid) {
      sup = std::max(sup, std::abs(oracle::step_value(fs[0], x) - oracle::step_value(other, x)));
    }
    if (std::abs(sup_distance(fs[0], other) - sup) > 1e-12) ++failures[3];
  }

  const double taus[] = {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
  for (int i = 0; i < kCases; ++i) {
    instances::RandomMdpSpec spec;
    spec.n_states = 3;
    spec.reward_levels = (i % 2) ? 5 : 0;
    spec.horizon = 3;
    const Mdp m = instances::random_mdp(rng, spec);
    std::vector<std::vector<int>> actions(3, std::vector<int>(3));
    for (auto& layer : actions) {
      for (auto& a : layer) a = static_cast<int>(rng() % 2);
    }
    const auto d = exact_distribution(m, space, markov(actions));
    if (std::abs(d.total_probability() - 1.0) > 1e-12) ++failures[4];
    double prev_f = 0.0, prev_g = 1.0 + 1e-12;
    bool monotone = true, identity = true;
    for (const auto& atom : d.atoms()) {
      for (double x : {atom.wealth - 0.5, atom.wealth, atom.wealth + 0.5}) {
        if (std::abs(strict_decumulative(d, x) - (1.0 - cdf(d, x))) > 1e-12) identity = false;
      }
      const double f = cdf(d, atom.wealth), g = decumulative(d, atom.wealth);
      if (f < prev_f - 1e-12 || g > prev_g + 1e-12) monotone = false;
      prev_f = f;
      prev_g = g;
    }
    if (!monotone) ++failures[5];
    if (!identity) ++failures[6];
    for (double tau : taus) {
      if (quantile(d, tau, QuantileCriterion::Lower) >
          quantile(d, tau, QuantileCriterion::Upper) + 1e-12) {
        ++failures[7];
        break;
      }
    }
  }

  const char* names[] = {"shift", "combine", "max", "sup-distance", "normalization",
                         "F/G monotone", "G_strict = 1 - F", "lower <= upper"};
  std::ostringstream detail;
  detail << kCases << " cases each;";
  for (int k = 0; k < 8; ++k) {
    detail << " " << names[k] << "=" << failures[k];
    o.require(failures[k] == 0, names[k]);
  }
  o.detail = detail.str() + " failures";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  OracleRuns runs;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d: %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", id, name, seconds_since(start),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  report(1, "ordinal quantiles of (0.5, 0.2, 0.3)", example_quantiles);
  report(2, "infinite-horizon counterexample", counterexample);
  report(3, "prec-corrected ordinal extraction", prec_correction);
  report(4, "solver matches brute force on G(4,2,2)", [&] {
    runs = oracle_equivalence();
    return criterion_oracle(runs);
  });
  report(5, "binary-search iteration bound", [&] { return criterion_bound(runs); });
  report(6, "quantile vs expectation policy on skewed G(100,5,7)", quantile_vs_standard);
  report(7, "Monte Carlo agrees with backward induction", monte_carlo);
  report(8, "value iteration matches horizon-200 truncation", truncation);
  report(9, "G(250,5,8) solve time", scaling);
  report(10, "randomized invariants", invariants);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
