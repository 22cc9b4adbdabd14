#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmdp/wealth_space.hpp"

namespace qmdp {

using StateId = int;
using ActionId = int;

/// One outgoing edge of a state-action pair.
struct Transition {
  StateId next;
  double probability;
  Reward reward;
};

enum class RewardKind {
  StateAction,      ///< r(s, a)
  StateActionNext,  ///< r(s, a, s')
};

/// Finite MDP with a sparse kernel. Rewards are stored on the edges; for
/// state-action rewards every edge of a row carries the same value.
class Mdp {
 public:
  Mdp() = default;
  Mdp(int n_states, int n_actions, RewardKind reward_kind, StateId initial_state,
      std::optional<int> horizon);

  int n_states() const noexcept { return n_states_; }
  int n_actions() const noexcept { return n_actions_; }
  RewardKind reward_kind() const noexcept { return reward_kind_; }
  StateId initial_state() const noexcept { return initial_state_; }
  /// Empty for an infinite horizon.
  std::optional<int> horizon() const noexcept { return horizon_; }
  bool finite_horizon() const noexcept { return horizon_.has_value(); }

  void set_horizon(std::optional<int> horizon) { horizon_ = horizon; }
  void set_initial_state(StateId s) { initial_state_ = s; }

  std::span<const Transition> row(StateId s, ActionId a) const {
    return rows_[index(s, a)];
  }
  std::vector<Transition>& mutable_row(StateId s, ActionId a) { return rows_[index(s, a)]; }

  /// Appends an edge. State-action reward models overwrite the reward later
  /// through set_reward.
  void add_transition(StateId s, ActionId a, StateId next, double probability,
                      Reward reward = 0.0);
  /// Sets r(s, a) on every edge of the row.
  void set_reward(StateId s, ActionId a, Reward reward);
  /// r(s, a) for state-action models; the first edge's reward otherwise.
  Reward reward(StateId s, ActionId a) const;

  /// Smallest and largest reward over edges with positive probability.
  std::pair<Reward, Reward> reward_range() const;

  /// Rows sharing a group id have identical successor lists and probabilities.
  int row_group(StateId s, ActionId a) const { return row_groups_[index(s, a)]; }
  int row_group_count() const noexcept { return n_row_groups_; }
  /// Recomputes row groups; call after the kernel is final.
  void finalize();

 private:
  std::size_t index(StateId s, ActionId a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions_) +
           static_cast<std::size_t>(a);
  }

  int n_states_ = 0;
  int n_actions_ = 0;
  RewardKind reward_kind_ = RewardKind::StateAction;
  StateId initial_state_ = 0;
  std::optional<int> horizon_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<int> row_groups_;
  int n_row_groups_ = 0;
};

struct Violation {
  StateId state = -1;
  ActionId action = -1;
  std::string message;
};

/// Reports every structural defect; an empty result means the model is valid.
std::vector<Violation> validate(const Mdp& m);

/// States reachable from the initial state at each step 0..horizon.
std::vector<std::vector<char>> reachable_states(const Mdp& m, int horizon);

/// Bounds of the terminal wealth levels W_T (or of the wealth after `steps` steps).
WealthBounds wealth_bounds(const Mdp& m, const WealthSpace& space, int steps);
WealthBounds wealth_bounds(const Mdp& m, const WealthSpace& space);

}  // namespace qmdp
