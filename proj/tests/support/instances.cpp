#include "instances.hpp"

#include <algorithm>
#include <numeric>

namespace qmdp::instances {

Mdp two_state_counterexample(std::optional<int> horizon) {
  Mdp m(2, 2, RewardKind::StateActionNext, 0, horizon);
  m.add_transition(0, 0, 0, 0.1, 1.0);
  m.add_transition(0, 0, 1, 0.9, -1.0);
  m.add_transition(0, 1, 1, 1.0, 1.0);
  m.add_transition(1, 0, 1, 1.0, 0.0);
  m.add_transition(1, 1, 1, 1.0, 0.0);
  m.finalize();
  return m;
}

OrdinalCase prec_correction_case() {
  // Labels move the start class w1 to w1, w2 or w3.
  auto space = WealthSpace::ordinal({"w1", "w2", "w3"}, {"to_w1", "to_w2", "to_w3"},
                                    {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}}, 0);
  Mdp m(4, 2, RewardKind::StateActionNext, 0, 1);
  m.add_transition(0, 0, 1, 0.5, 0.0);
  m.add_transition(0, 0, 3, 0.5, 2.0);
  m.add_transition(0, 1, 2, 0.6, 1.0);
  m.add_transition(0, 1, 3, 0.4, 2.0);
  for (StateId s = 1; s < 4; ++s) {
    m.add_transition(s, 0, s, 1.0, 0.0);
    m.add_transition(s, 1, s, 1.0, 0.0);
  }
  m.finalize();
  return {std::move(m), std::move(space)};
}

Mdp random_mdp(std::mt19937_64& rng, const RandomMdpSpec& spec) {
  Mdp m(spec.n_states, spec.n_actions, spec.reward_kind, 0, spec.horizon);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_reward = [&] {
    if (spec.reward_levels > 1) {
      std::uniform_int_distribution<int> level(0, spec.reward_levels - 1);
      return spec.reward_low +
             (spec.reward_high - spec.reward_low) * level(rng) / (spec.reward_levels - 1);
    }
    return spec.reward_low + (spec.reward_high - spec.reward_low) * unit(rng);
  };
  std::vector<int> states(static_cast<std::size_t>(spec.n_states));
  std::iota(states.begin(), states.end(), 0);
  const int cap = std::min(spec.max_branching, spec.n_states);
  for (StateId s = 0; s < spec.n_states; ++s) {
    for (ActionId a = 0; a < spec.n_actions; ++a) {
      const int k = std::uniform_int_distribution<int>(1, cap)(rng);
      std::shuffle(states.begin(), states.end(), rng);
      std::vector<double> w(static_cast<std::size_t>(k));
      double total = 0.0;
      for (auto& x : w) total += (x = 0.05 + unit(rng));
      for (int i = 0; i < k; ++i) {
        m.add_transition(s, a, states[i], w[i] / total, draw_reward());
      }
      if (spec.reward_kind == RewardKind::StateAction) m.set_reward(s, a, draw_reward());
    }
  }
  m.finalize();
  return m;
}

Mdp random_nonpositive_mdp(std::mt19937_64& rng, int n_states) {
  const int sink = n_states - 1;
  Mdp m(n_states, 2, RewardKind::StateAction, 0, std::nullopt);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (StateId s = 0; s < sink; ++s) {
    for (ActionId a = 0; a < 2; ++a) {
      const double stay = 0.3 * u(rng);
      const double move = 0.5 * u(rng);
      if (sink > 1) {
        const StateId other = static_cast<StateId>((s + 1 + rng() % (sink - 1)) % sink);
        m.add_transition(s, a, s, stay);
        m.add_transition(s, a, other, move);
      } else {
        m.add_transition(s, a, s, stay + move);
      }
      m.add_transition(s, a, sink, 1.0 - stay - move);
      m.set_reward(s, a, -0.1 - 0.9 * u(rng));
    }
  }
  for (ActionId a = 0; a < 2; ++a) m.add_transition(sink, a, sink, 1.0, 0.0);
  m.finalize();
  return m;
}

StepFunction random_step_function(std::mt19937_64& rng, int max_steps, bool nondecreasing) {
  std::uniform_int_distribution<int> count(0, max_steps);
  std::uniform_int_distribution<int> grid(-16, 16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const int n = count(rng);
  std::vector<Step> steps;
  for (int i = 0; i < n; ++i) steps.push_back({0.25 * grid(rng), coin(rng), unit(rng)});
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
    return a.at != b.at ? a.at < b.at : a.inclusive > b.inclusive;
  });
  double base = unit(rng);
  if (nondecreasing) {
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    for (auto& v : values) v = unit(rng);
    std::sort(values.begin(), values.end());
    base = values[0];
    for (int i = 0; i < n; ++i) steps[i].value = values[i + 1];
  }
  return StepFunction(base, std::move(steps));
}

}  // namespace qmdp::instances
