#include "qmdp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qmdp/errors.hpp"

namespace qmdp {

int log2_branching(int n_states) {
  if (n_states <= 1) return 1;
  int b = 0;
  while ((1LL << b) < n_states) ++b;
  return b;
}

Mdp generate_garnet(const GarnetConfig& cfg) {
  if (cfg.n_states < 1 || cfg.n_actions < 1) {
    throw ArgumentError("garnet needs at least one state and one action");
  }
  if (cfg.branching < 1 || cfg.branching > cfg.n_states) {
    throw ArgumentError("garnet branching must lie in [1, n_states], got " +
                        std::to_string(cfg.branching));
  }
  if (!(cfg.reward_low <= cfg.reward_high)) {
    throw ArgumentError("garnet reward_low must not exceed reward_high");
  }
  if (!(cfg.skew > 0.0)) throw ArgumentError("garnet skew must be positive");
  if (cfg.initial_state < 0 || cfg.initial_state >= cfg.n_states) {
    throw ArgumentError("garnet initial state out of range");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Mdp m(cfg.n_states, cfg.n_actions, RewardKind::StateAction, cfg.initial_state, cfg.horizon);
  std::vector<int> states(static_cast<std::size_t>(cfg.n_states));
  std::iota(states.begin(), states.end(), 0);
  std::vector<double> cuts(static_cast<std::size_t>(cfg.branching) + 1);

  for (StateId s = 0; s < cfg.n_states; ++s) {
    for (ActionId a = 0; a < cfg.n_actions; ++a) {
      // Partial Fisher-Yates: the first `branching` entries become the successors.
      for (int k = 0; k < cfg.branching; ++k) {
        std::uniform_int_distribution<int> pick(k, cfg.n_states - 1);
        std::swap(states[k], states[pick(rng)]);
      }
      cuts.front() = 0.0;
      cuts.back() = 1.0;
      for (int k = 1; k < cfg.branching; ++k) cuts[k] = unit(rng);
      std::sort(cuts.begin() + 1, cuts.end() - 1);

      const double u = unit(rng);
      const Reward r =
          cfg.reward_low + (cfg.reward_high - cfg.reward_low) * std::pow(u, cfg.skew);

      std::vector<int> successors(states.begin(), states.begin() + cfg.branching);
      std::sort(successors.begin(), successors.end());
      for (int k = 0; k < cfg.branching; ++k) {
        m.add_transition(s, a, successors[k], cuts[k + 1] - cuts[k], r);
      }
    }
  }
  m.finalize();
  return m;
}

DataCenterConfig resolved(const DataCenterConfig& cfg) {
  if (cfg.n_servers < 1) throw ArgumentError("data center needs at least one server");
  DataCenterConfig out = cfg;
  const int n = cfg.n_servers;
  if (out.lambda_low == 0.0) out.lambda_low = (n + 1) / 2;
  if (out.lambda_mid == 0.0) out.lambda_mid = (3 * n + 1) / 2;
  if (out.lambda_high == 0.0) out.lambda_high = (5 * n + 1) / 2;
  if (out.mid_threshold == 0) out.mid_threshold = n;
  if (out.high_threshold == 0) out.high_threshold = 2 * n;
  if (!(out.lambda_low > 0.0 && out.lambda_mid > 0.0 && out.lambda_high > 0.0)) {
    throw ArgumentError("Poisson rates must be positive");
  }
  if (!(0 < out.mid_threshold && out.mid_threshold <= out.high_threshold &&
        out.high_threshold <= 3 * n)) {
    throw ArgumentError("regime thresholds must satisfy 0 < mid <= high <= 3n");
  }
  if (out.jobs_per_server <= 0.0) throw ArgumentError("jobs_per_server must be positive");
  return out;
}

int datacenter_state(const DataCenterConfig& cfg, int servers_on, int jobs) {
  return (servers_on - 1) * 3 * cfg.n_servers + jobs;
}

namespace {

// Poisson(lambda) restricted to {0..max_jobs} and renormalized.
std::vector<double> truncated_poisson(double lambda, int max_jobs) {
  std::vector<double> logp(static_cast<std::size_t>(max_jobs) + 1);
  for (int k = 0; k <= max_jobs; ++k) {
    logp[k] = k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  std::vector<double> p(logp.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp(logp[k] - top);
    total += p[k];
  }
  for (auto& v : p) v /= total;
  return p;
}

}  // namespace

Mdp generate_datacenter(const DataCenterConfig& config) {
  const DataCenterConfig cfg = resolved(config);
  const int n = cfg.n_servers;
  const int jobs = 3 * n;
  Mdp m(n * jobs, n, RewardKind::StateAction, datacenter_state(cfg, 1, 0), cfg.horizon);

  const auto low = truncated_poisson(cfg.lambda_low, jobs - 1);
  const auto mid = truncated_poisson(cfg.lambda_mid, jobs - 1);
  const auto high = truncated_poisson(cfg.lambda_high, jobs - 1);

  for (int on = 1; on <= n; ++on) {
    for (int j = 0; j < jobs; ++j) {
      const auto& arrivals = j < cfg.mid_threshold ? low : (j < cfg.high_threshold ? mid : high);
      const StateId s = datacenter_state(cfg, on, j);
      for (int next_on = 1; next_on <= n; ++next_on) {
        const ActionId a = next_on - 1;
        const double unserved = std::max(0.0, j - cfg.jobs_per_server * next_on);
        const Reward r = -(cfg.power_cost * next_on + cfg.qos_cost * unserved);
        for (int nj = 0; nj < jobs; ++nj) {
          if (arrivals[nj] > 0.0) {
            m.add_transition(s, a, datacenter_state(cfg, next_on, nj), arrivals[nj], r);
          }
        }
      }
    }
  }
  m.finalize();
  return m;
}

}  // namespace qmdp
