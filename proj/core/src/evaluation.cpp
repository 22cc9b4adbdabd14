#include "qmdp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "qmdp/errors.hpp"

namespace qmdp {

namespace {

int resolve_horizon(const Mdp& m, std::optional<int> horizon) {
  if (horizon) {
    if (*horizon < 0) throw ArgumentError("evaluation horizon must be nonnegative");
    return *horizon;
  }
  if (!m.horizon()) {
    throw ArgumentError("infinite-horizon model: pass an evaluation horizon");
  }
  return *m.horizon();
}

void check_policy_shape(const Mdp& m, const WealthMarkovPolicy& pi, int horizon) {
  if (pi.n_states() != m.n_states()) {
    throw ArgumentError("policy covers " + std::to_string(pi.n_states()) +
                        " states, model has " + std::to_string(m.n_states()));
  }
  if (!pi.stationary() && pi.layers() < horizon) {
    throw ArgumentError("policy has " + std::to_string(pi.layers()) +
                        " layers, horizon is " + std::to_string(horizon));
  }
}

ActionId checked_action(const Mdp& m, const WealthMarkovPolicy& pi, int t, StateId s, Wealth w) {
  const ActionId a = pi.action(t, s, w);
  if (a < 0 || a >= m.n_actions()) {
    throw ArgumentError("policy selects invalid action " + std::to_string(a));
  }
  return a;
}

void merge_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.wealth < b.wealth; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (out > 0 && atoms[i].wealth - atoms[out - 1].wealth <= kWealthTolerance) {
      atoms[out - 1].probability += atoms[i].probability;
    } else {
      atoms[out++] = atoms[i];
    }
  }
  atoms.resize(out);
}

}  // namespace

WealthDistribution exact_distribution(const Mdp& m, const WealthSpace& space,
                                      const WealthMarkovPolicy& pi, const EvalOptions& options) {
  const int horizon = resolve_horizon(m, options.horizon);
  check_policy_shape(m, pi, horizon);
  const auto n = static_cast<std::size_t>(m.n_states());

  std::vector<std::vector<Atom>> layer(n);
  layer[m.initial_state()].push_back({space.w0(), 1.0});
  std::size_t atoms_seen = 1;
  for (int t = 0; t < horizon; ++t) {
    std::vector<std::vector<Atom>> next(n);
    for (StateId s = 0; s < m.n_states(); ++s) {
      for (const auto& atom : layer[s]) {
        const ActionId a = checked_action(m, pi, t, s, atom.wealth);
        for (const auto& e : m.row(s, a)) {
          if (e.probability <= 0.0) continue;
          next[e.next].push_back(
              {space.accumulate(atom.wealth, e.reward, t), atom.probability * e.probability});
        }
      }
    }
    for (auto& atoms : next) {
      merge_atoms(atoms);
      atoms_seen += atoms.size();
      if (atoms_seen > options.atom_cap) {
        throw ResourceError("exact evaluation exceeds " + std::to_string(options.atom_cap) +
                            " reachable atoms; use Monte Carlo simulation instead");
      }
    }
    layer = std::move(next);
  }

  std::vector<Atom> terminal;
  for (auto& atoms : layer) terminal.insert(terminal.end(), atoms.begin(), atoms.end());
  return WealthDistribution::from_atoms(std::move(terminal));
}

std::vector<Wealth> simulate(const Mdp& m, const WealthSpace& space,
                             const WealthMarkovPolicy& pi, std::size_t n, std::uint64_t seed,
                             int workers, std::optional<int> horizon) {
  if (n < 1) throw ArgumentError("simulate needs at least one episode");
  if (workers < 1) throw ArgumentError("simulate needs at least one worker");
  const int steps = resolve_horizon(m, horizon);
  check_policy_shape(m, pi, steps);

  std::vector<Wealth> samples(n);
  const std::size_t block = (n + static_cast<std::size_t>(workers) - 1) / workers;

  auto run_block = [&](int k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t begin = static_cast<std::size_t>(k) * block;
    const std::size_t end = std::min(n, begin + block);
    for (std::size_t i = begin; i < end; ++i) {
      StateId s = m.initial_state();
      Wealth w = space.w0();
      for (int t = 0; t < steps; ++t) {
        const ActionId a = checked_action(m, pi, t, s, w);
        const auto row = m.row(s, a);
        const double u = unit(rng);
        double cumulative = 0.0;
        const Transition* chosen = nullptr;
        for (const auto& e : row) {
          if (e.probability <= 0.0) continue;
          chosen = &e;
          cumulative += e.probability;
          if (u < cumulative) break;
        }
        w = space.accumulate(w, chosen->reward, t);
        s = chosen->next;
      }
      samples[i] = w;
    }
  };

  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(run_block, k);
  }
  return samples;
}

namespace {

struct Node {
  StateId state;
  Wealth wealth;
  double probability;
};

class PolicyEnumerator {
 public:
  PolicyEnumerator(const Mdp& m, const WealthSpace& space, double tau,
                   QuantileCriterion criterion, std::size_t cap)
      : m_(m), space_(space), tau_(tau), criterion_(criterion), cap_(cap) {}

  OracleResult run() {
    const int horizon = *m_.horizon();
    stack_.resize(static_cast<std::size_t>(horizon));
    enumerate(0, {{m_.initial_state(), space_.w0(), 1.0}});
    OracleResult out;
    out.quantile = best_;
    out.policy = WealthMarkovPolicy(std::move(best_rules_), false);
    out.policies_enumerated = leaves_;
    return out;
  }

 private:
  struct Layer {
    std::vector<Node> nodes;
    std::vector<int> actions;
  };

  void enumerate(int t, std::vector<Node> nodes) {
    if (t == static_cast<int>(stack_.size())) {
      finish(nodes);
      return;
    }
    std::vector<int> actions(nodes.size(), 0);
    while (true) {
      std::vector<Node> next;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& e : m_.row(nodes[i].state, actions[i])) {
          if (e.probability <= 0.0) continue;
          next.push_back({e.next, space_.accumulate(nodes[i].wealth, e.reward, t),
                          nodes[i].probability * e.probability});
        }
      }
      stack_[t] = {nodes, actions};
      enumerate(t + 1, merge(std::move(next)));

      std::size_t k = 0;
      while (k < actions.size() && ++actions[k] == m_.n_actions()) actions[k++] = 0;
      if (k == actions.size()) break;
    }
  }

  static std::vector<Node> merge(std::vector<Node> nodes) {
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
      return a.state != b.state ? a.state < b.state : a.wealth < b.wealth;
    });
    std::vector<Node> out;
    for (const auto& n : nodes) {
      if (!out.empty() && out.back().state == n.state &&
          n.wealth - out.back().wealth <= kWealthTolerance) {
        out.back().probability += n.probability;
      } else {
        out.push_back(n);
      }
    }
    return out;
  }

  void finish(const std::vector<Node>& nodes) {
    if (++leaves_ > cap_) {
      throw ResourceError("oracle enumeration exceeds " + std::to_string(cap_) + " policies");
    }
    std::vector<Atom> atoms;
    atoms.reserve(nodes.size());
    for (const auto& n : nodes) atoms.push_back({n.wealth, n.probability});
    const Wealth q = quantile(WealthDistribution::from_atoms(std::move(atoms)), tau_, criterion_);
    if (leaves_ == 1 || q > best_ + kWealthTolerance) {
      best_ = q;
      best_rules_ = snapshot();
    }
  }

  std::vector<std::vector<DecisionRule>> snapshot() const {
    std::vector<std::vector<DecisionRule>> rules(
        stack_.size(), std::vector<DecisionRule>(static_cast<std::size_t>(m_.n_states())));
    for (std::size_t t = 0; t < stack_.size(); ++t) {
      const auto& layer = stack_[t];
      std::size_t i = 0;
      while (i < layer.nodes.size()) {
        const StateId s = layer.nodes[i].state;
        const int base = layer.actions[i];
        int current = base;
        std::vector<ActionInterval> intervals;
        for (; i < layer.nodes.size() && layer.nodes[i].state == s; ++i) {
          if (layer.actions[i] != current) {
            current = layer.actions[i];
            intervals.push_back({layer.nodes[i].wealth, true, current});
          }
        }
        rules[t][s] = DecisionRule(base, std::move(intervals));
      }
    }
    return rules;
  }

  const Mdp& m_;
  const WealthSpace& space_;
  double tau_;
  QuantileCriterion criterion_;
  std::size_t cap_;
  std::vector<Layer> stack_;
  std::size_t leaves_ = 0;
  Wealth best_ = 0.0;
  std::vector<std::vector<DecisionRule>> best_rules_;
};

}  // namespace

OracleResult brute_force_optimal_quantile(const Mdp& m, const WealthSpace& space, double tau,
                                          QuantileCriterion criterion, std::size_t policy_cap) {
  check_tau(tau, criterion);
  if (!m.finite_horizon()) throw ArgumentError("the enumeration oracle needs a finite horizon");
  return PolicyEnumerator(m, space, tau, criterion, policy_cap).run();
}

WealthMarkovPolicy StandardSolution::as_policy() const {
  std::vector<std::vector<DecisionRule>> rules;
  rules.reserve(actions.size());
  for (const auto& layer : actions) {
    std::vector<DecisionRule> row;
    row.reserve(layer.size());
    for (int a : layer) row.emplace_back(a);
    rules.push_back(std::move(row));
  }
  return WealthMarkovPolicy(std::move(rules), false);
}

StandardSolution standard_backward_induction(const Mdp& m, double discount) {
  if (!m.finite_horizon()) {
    throw ArgumentError("standard backward induction needs a finite horizon");
  }
  const int horizon = *m.horizon();
  const auto n = static_cast<std::size_t>(m.n_states());
  StandardSolution sol;
  sol.values.assign(static_cast<std::size_t>(horizon) + 1, std::vector<double>(n, 0.0));
  sol.actions.assign(static_cast<std::size_t>(horizon), std::vector<int>(n, 0));
  std::vector<double> q(static_cast<std::size_t>(m.n_actions()));
  for (int t = horizon - 1; t >= 0; --t) {
    for (StateId s = 0; s < m.n_states(); ++s) {
      for (ActionId a = 0; a < m.n_actions(); ++a) {
        double value = 0.0;
        for (const auto& e : m.row(s, a)) {
          value += e.probability * (e.reward + discount * sol.values[t + 1][e.next]);
        }
        q[a] = value;
      }
      const double top = *std::max_element(q.begin(), q.end());
      const double slack = 1e-12 * std::max(1.0, std::abs(top));
      int best = 0;
      while (q[best] < top - slack) ++best;
      sol.actions[t][s] = best;
      sol.values[t][s] = top;
    }
  }
  return sol;
}

}  // namespace qmdp
