#pragma once

#include <cstdint>
#include <optional>

#include "qmdp/mdp.hpp"

namespace qmdp {

/// Random MDP family G(n_states, n_actions, branching).
struct GarnetConfig {
  int n_states = 10;
  int n_actions = 2;
  int branching = 2;
  double reward_low = 0.0;
  double reward_high = 1.0;
  /// Rewards are drawn as low + (high - low) * u^skew with u ~ U[0,1).
  /// 1 gives uniform rewards; larger values push reward mass toward `reward_low`.
  double skew = 1.0;
  std::optional<int> horizon = 5;
  StateId initial_state = 0;
  std::uint64_t seed = 0;
};

/// ceil(log2 n), the branching factor used for the Garnet benchmarks.
int log2_branching(int n_states);

Mdp generate_garnet(const GarnetConfig& cfg);

/// Server provisioning model: state (servers on, pending jobs), action = servers
/// on at the next step, Poisson job arrivals whose rate depends on the load regime.
struct DataCenterConfig {
  int n_servers = 10;
  /// Zero selects the defaults ceil(n/2), ceil(3n/2), ceil(5n/2).
  double lambda_low = 0.0;
  double lambda_mid = 0.0;
  double lambda_high = 0.0;
  /// Jobs below `mid_threshold` use lambda_low, below `high_threshold` lambda_mid.
  /// Zero selects the defaults n and 2n.
  int mid_threshold = 0;
  int high_threshold = 0;
  double power_cost = 1.0;     ///< alpha, per active server
  double qos_cost = 10.0;      ///< beta, per job left unserved
  double jobs_per_server = 3.0;  ///< kappa
  std::optional<int> horizon = 5;
  std::uint64_t seed = 0;
};

/// Fills the zero-valued defaults of a data-center config.
DataCenterConfig resolved(const DataCenterConfig& cfg);

int datacenter_state(const DataCenterConfig& cfg, int servers_on, int jobs);
Mdp generate_datacenter(const DataCenterConfig& cfg);

}  // namespace qmdp
