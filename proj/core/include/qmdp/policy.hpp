#pragma once

#include <span>
#include <vector>

#include "qmdp/wealth_space.hpp"

namespace qmdp {

/// From `from` (inclusive or not) onward, take `action`.
struct ActionInterval {
  Wealth from;
  bool inclusive_from;
  int action;

  bool operator==(const ActionInterval&) const = default;
};

/// Action choice of one (step, state) as a function of current wealth.
/// Wealth below the first interval uses `base_action`.
class DecisionRule {
 public:
  DecisionRule() = default;
  explicit DecisionRule(int action) : base_action_(action) {}
  DecisionRule(int base_action, std::vector<ActionInterval> intervals);

  int base_action() const noexcept { return base_action_; }
  std::span<const ActionInterval> intervals() const noexcept { return intervals_; }

  int action_at(Wealth w) const;

  bool operator==(const DecisionRule&) const = default;

 private:
  int base_action_ = 0;
  std::vector<ActionInterval> intervals_;
};

/// Deterministic policy whose decisions depend on step, state and wealth.
/// A stationary policy holds one layer used at every step.
class WealthMarkovPolicy {
 public:
  WealthMarkovPolicy() = default;
  /// `rules[t][s]`; stationary policies pass exactly one layer.
  WealthMarkovPolicy(std::vector<std::vector<DecisionRule>> rules, bool stationary);

  static WealthMarkovPolicy constant(int n_states, int horizon, int action);

  bool stationary() const noexcept { return stationary_; }
  int layers() const noexcept { return static_cast<int>(rules_.size()); }
  int n_states() const noexcept { return rules_.empty() ? 0 : static_cast<int>(rules_[0].size()); }

  const DecisionRule& rule(int t, int s) const;
  int action(int t, int s, Wealth w) const { return rule(t, s).action_at(w); }

  const std::vector<std::vector<DecisionRule>>& rules() const noexcept { return rules_; }

  bool operator==(const WealthMarkovPolicy&) const = default;

 private:
  std::vector<std::vector<DecisionRule>> rules_;
  bool stationary_ = false;
};

}  // namespace qmdp
