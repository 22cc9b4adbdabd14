#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmdp/mdp.hpp"
#include "qmdp/step_function.hpp"
#include "qmdp/wealth_space.hpp"

namespace qmdp::instances {

/// Two states s1 = 0, s2 = 1. In s1, a1 = 0 stays with prob 0.1 (reward 1) or
/// moves to s2 with prob 0.9 (reward -1); a2 = 1 moves to s2 with reward 1.
/// s2 is absorbing with zero reward. Next-state rewards.
Mdp two_state_counterexample(std::optional<int> horizon);

/// Classes w1 < w2 < w3, one step. Action 0 yields class cumulatives
/// (0.5, 0.5, 1), action 1 yields (0, 0.6, 1).
struct OrdinalCase {
  Mdp mdp;
  WealthSpace space;
};
OrdinalCase prec_correction_case();

struct RandomMdpSpec {
  int n_states = 4;
  int n_actions = 2;
  int max_branching = 3;
  double reward_low = -1.0;
  double reward_high = 1.0;
  /// Draw rewards from a grid of this many values (0 = continuous).
  int reward_levels = 0;
  RewardKind reward_kind = RewardKind::StateAction;
  std::optional<int> horizon = 3;
};

Mdp random_mdp(std::mt19937_64& rng, const RandomMdpSpec& spec);

/// Two actions, rewards in [-1, -0.1]; transient states drain into an
/// absorbing zero-reward sink (the last state). Infinite horizon.
Mdp random_nonpositive_mdp(std::mt19937_64& rng, int n_states);

/// Random step function with thresholds on a 0.25 grid in [-4, 4] and mixed inclusivity.
StepFunction random_step_function(std::mt19937_64& rng, int max_steps, bool nondecreasing);

}  // namespace qmdp::instances
