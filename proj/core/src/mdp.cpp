#include "qmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "qmdp/errors.hpp"

namespace qmdp {

Mdp::Mdp(int n_states, int n_actions, RewardKind reward_kind, StateId initial_state,
         std::optional<int> horizon)
    : n_states_(n_states),
      n_actions_(n_actions),
      reward_kind_(reward_kind),
      initial_state_(initial_state),
      horizon_(horizon) {
  if (n_states <= 0 || n_actions <= 0) {
    throw ConfigError("an MDP needs at least one state and one action");
  }
  rows_.resize(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions));
}

void Mdp::add_transition(StateId s, ActionId a, StateId next, double probability,
                         Reward reward) {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_) {
    throw ConfigError("transition source (" + std::to_string(s) + ", " + std::to_string(a) +
                      ") out of range");
  }
  auto& r = rows_[index(s, a)];
  if (reward_kind_ == RewardKind::StateAction && !r.empty()) reward = r.front().reward;
  r.push_back({next, probability, reward});
}

void Mdp::set_reward(StateId s, ActionId a, Reward reward) {
  for (auto& e : rows_.at(index(s, a))) e.reward = reward;
}

Reward Mdp::reward(StateId s, ActionId a) const {
  const auto& r = rows_.at(index(s, a));
  return r.empty() ? 0.0 : r.front().reward;
}

std::pair<Reward, Reward> Mdp::reward_range() const {
  Reward lo = std::numeric_limits<double>::infinity();
  Reward hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows_) {
    for (const auto& e : r) {
      if (e.probability <= 0.0) continue;
      lo = std::min(lo, e.reward);
      hi = std::max(hi, e.reward);
    }
  }
  if (lo > hi) return {0.0, 0.0};
  return {lo, hi};
}

void Mdp::finalize() {
  std::map<std::vector<std::pair<StateId, double>>, int> groups;
  row_groups_.assign(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::vector<std::pair<StateId, double>> key;
    key.reserve(rows_[i].size());
    for (const auto& e : rows_[i]) key.emplace_back(e.next, e.probability);
    auto [it, inserted] = groups.try_emplace(std::move(key), static_cast<int>(groups.size()));
    row_groups_[i] = it->second;
  }
  n_row_groups_ = static_cast<int>(groups.size());
}

std::vector<Violation> validate(const Mdp& m) {
  std::vector<Violation> out;
  if (m.n_states() <= 0 || m.n_actions() <= 0) {
    out.push_back({-1, -1, "model has no states or no actions"});
    return out;
  }
  if (m.initial_state() < 0 || m.initial_state() >= m.n_states()) {
    out.push_back({m.initial_state(), -1, "initial state out of range"});
  }
  if (m.horizon() && *m.horizon() <= 0) {
    out.push_back({-1, -1, "horizon must be positive"});
  }
  for (StateId s = 0; s < m.n_states(); ++s) {
    for (ActionId a = 0; a < m.n_actions(); ++a) {
      const auto row = m.row(s, a);
      double total = 0.0;
      std::vector<StateId> seen;
      for (const auto& e : row) {
        if (e.next < 0 || e.next >= m.n_states()) {
          out.push_back({s, a, "successor " + std::to_string(e.next) + " out of range"});
        }
        if (!std::isfinite(e.probability) || e.probability < 0.0) {
          std::ostringstream msg;
          msg << "invalid probability " << e.probability << " to state " << e.next;
          out.push_back({s, a, msg.str()});
        }
        if (!std::isfinite(e.reward)) {
          out.push_back({s, a, "non-finite reward to state " + std::to_string(e.next)});
        }
        if (std::find(seen.begin(), seen.end(), e.next) != seen.end()) {
          out.push_back({s, a, "duplicate successor " + std::to_string(e.next)});
        }
        seen.push_back(e.next);
        total += e.probability;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "probabilities sum to " << total;
        out.push_back({s, a, msg.str()});
      }
    }
  }
  return out;
}

std::vector<std::vector<char>> reachable_states(const Mdp& m, int horizon) {
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(horizon) + 1,
                                       std::vector<char>(static_cast<std::size_t>(m.n_states()), 0));
  reach[0][static_cast<std::size_t>(m.initial_state())] = 1;
  for (int t = 0; t < horizon; ++t) {
    for (StateId s = 0; s < m.n_states(); ++s) {
      if (!reach[t][s]) continue;
      for (ActionId a = 0; a < m.n_actions(); ++a) {
        for (const auto& e : m.row(s, a)) {
          if (e.probability > 0.0) reach[t + 1][e.next] = 1;
        }
      }
    }
  }
  return reach;
}

WealthBounds wealth_bounds(const Mdp& m, const WealthSpace& space, int steps) {
  if (space.kind() == WealthKind::Ordinal) {
    return {0.0, space.class_wealth(space.class_count() - 1)};
  }
  const auto [rmin, rmax] = m.reward_range();
  double weight = 0.0;
  for (int t = 0; t < steps; ++t) weight += space.step_weight(t);
  return {space.w0() + weight * rmin, space.w0() + weight * rmax};
}

WealthBounds wealth_bounds(const Mdp& m, const WealthSpace& space) {
  if (m.horizon()) return wealth_bounds(m, space, *m.horizon());
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (space.kind() == WealthKind::Ordinal) return wealth_bounds(m, space, 0);
  const auto [rmin, rmax] = m.reward_range();
  const Wealth w0 = space.w0();
  if (space.kind() == WealthKind::Discounted && space.gamma() < 1.0) {
    const double horizon_weight = 1.0 / (1.0 - space.gamma());
    return {w0 + std::min(0.0, rmin) * horizon_weight, w0 + std::max(0.0, rmax) * horizon_weight};
  }
  if (rmin >= 0.0 && rmax <= 0.0) return {w0, w0};
  if (rmax <= 0.0) return {-inf, w0};
  if (rmin >= 0.0) return {w0, inf};
  return {-inf, inf};
}

}  // namespace qmdp
