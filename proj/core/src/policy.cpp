#include "qmdp/policy.hpp"

#include <algorithm>
#include <string>

#include "qmdp/errors.hpp"

namespace qmdp {

DecisionRule::DecisionRule(int base_action, std::vector<ActionInterval> intervals)
    : base_action_(base_action), intervals_(std::move(intervals)) {}

int DecisionRule::action_at(Wealth w) const {
  const auto it = std::partition_point(
      intervals_.begin(), intervals_.end(),
      [&](const ActionInterval& iv) { return reaches(w, iv.from, iv.inclusive_from); });
  return it == intervals_.begin() ? base_action_ : std::prev(it)->action;
}

WealthMarkovPolicy::WealthMarkovPolicy(std::vector<std::vector<DecisionRule>> rules,
                                       bool stationary)
    : rules_(std::move(rules)), stationary_(stationary) {
  if (stationary_ && rules_.size() != 1) {
    throw ArgumentError("a stationary policy holds exactly one layer of rules");
  }
  for (const auto& layer : rules_) {
    if (layer.size() != rules_.front().size()) {
      throw ArgumentError("every policy layer needs one rule per state");
    }
  }
}

WealthMarkovPolicy WealthMarkovPolicy::constant(int n_states, int horizon, int action) {
  std::vector<std::vector<DecisionRule>> rules(
      static_cast<std::size_t>(horizon),
      std::vector<DecisionRule>(static_cast<std::size_t>(n_states), DecisionRule(action)));
  return WealthMarkovPolicy(std::move(rules), false);
}

const DecisionRule& WealthMarkovPolicy::rule(int t, int s) const {
  const std::size_t layer = stationary_ ? 0 : static_cast<std::size_t>(t);
  if (layer >= rules_.size() || s < 0 || static_cast<std::size_t>(s) >= rules_[layer].size()) {
    throw ArgumentError("policy has no rule for step " + std::to_string(t) + ", state " +
                        std::to_string(s));
  }
  return rules_[layer][static_cast<std::size_t>(s)];
}

}  // namespace qmdp
