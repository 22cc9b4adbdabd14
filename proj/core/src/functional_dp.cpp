#include "qmdp/functional_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "qmdp/errors.hpp"

namespace qmdp {

namespace {

constexpr double kWindowMargin = 1e-7;

Window widen(WealthBounds b) {
  double scale = 0.0;
  if (std::isfinite(b.lo)) scale = std::max(scale, std::abs(b.lo));
  if (std::isfinite(b.hi)) scale = std::max(scale, std::abs(b.hi));
  const double slack = kWindowMargin + 1e-12 * scale;
  return {b.lo - slack, b.hi + slack};
}

// Wealth reachable after `steps` rewards; ordinal slices are never clipped.
Window step_window(const Mdp& m, const WealthSpace& space, int steps, bool clip) {
  if (!clip || space.kind() == WealthKind::Ordinal) return {};
  return widen(wealth_bounds(m, space, steps));
}

// One Bellman update V_t(s, .) = max_a sum_s' P(s,a,s') V_{t+1}(s', . o r).
class BellmanSweep {
 public:
  BellmanSweep(const Mdp& m, const WealthSpace& space, const std::vector<StepFunction>& next,
               int t, Window window)
      : m_(m),
        space_(space),
        next_(next),
        t_(t),
        window_(window),
        grouped_(m.reward_kind() == RewardKind::StateAction) {}

  // Combines the successor slices of every row group used by an active state.
  void prepare(const std::vector<char>& active) {
    if (!grouped_) return;
    std::vector<char> needed(static_cast<std::size_t>(m_.row_group_count()), 0);
    for (StateId s = 0; s < m_.n_states(); ++s) {
      if (!active[s]) continue;
      for (ActionId a = 0; a < m_.n_actions(); ++a) needed[m_.row_group(s, a)] = 1;
    }
    std::vector<int> work;
    for (int g = 0; g < m_.row_group_count(); ++g) {
      if (needed[g]) work.push_back(g);
    }
    std::vector<std::pair<StateId, ActionId>> witness(needed.size(), {-1, -1});
    for (StateId s = 0; s < m_.n_states(); ++s) {
      for (ActionId a = 0; a < m_.n_actions(); ++a) {
        auto& w = witness[m_.row_group(s, a)];
        if (w.first < 0) w = {s, a};
      }
    }
    groups_.assign(needed.size(), StepFunction{});
    detail::parallel_for(work.size(), [&](std::size_t i) {
      const int g = work[i];
      const auto [s, a] = witness[g];
      std::vector<WeightedTerm> terms;
      for (const auto& e : m_.row(s, a)) terms.push_back({e.probability, &next_[e.next], 0.0});
      groups_[g] = combine(terms);
    });
  }

  Envelope envelope(StateId s) const {
    std::vector<StepFunction> q;
    q.reserve(static_cast<std::size_t>(m_.n_actions()));
    for (ActionId a = 0; a < m_.n_actions(); ++a) q.push_back(action_value(s, a));
    return pointwise_max(q);
  }

 private:
  StepFunction action_value(StateId s, ActionId a) const {
    const bool ordinal = space_.kind() == WealthKind::Ordinal;
    if (grouped_) {
      const StepFunction& c = groups_[m_.row_group(s, a)];
      const Reward r = m_.reward(s, a);
      if (ordinal) return shift(c, r, t_, space_);
      return c.translated(space_.step_weight(t_) * r).clipped(window_.lo, window_.hi);
    }
    const auto row = m_.row(s, a);
    std::vector<WeightedTerm> terms;
    terms.reserve(row.size());
    if (ordinal) {
      std::vector<StepFunction> pulled;
      pulled.reserve(row.size());
      for (const auto& e : row) pulled.push_back(shift(next_[e.next], e.reward, t_, space_));
      for (std::size_t k = 0; k < row.size(); ++k) {
        terms.push_back({row[k].probability, &pulled[k], 0.0});
      }
      return combine(terms);
    }
    const double weight = space_.step_weight(t_);
    for (const auto& e : row) terms.push_back({e.probability, &next_[e.next], weight * e.reward});
    return combine(terms, window_);
  }

  const Mdp& m_;
  const WealthSpace& space_;
  const std::vector<StepFunction>& next_;
  int t_;
  Window window_;
  bool grouped_;
  std::vector<StepFunction> groups_;
};

void record(DpStats& stats, const StepFunction& f) {
  stats.max_pieces = std::max(stats.max_pieces, f.piece_count());
  stats.total_pieces += f.piece_count();
}

std::vector<StateId> active_list(const std::vector<char>& active) {
  std::vector<StateId> out;
  for (std::size_t s = 0; s < active.size(); ++s) {
    if (active[s]) out.push_back(static_cast<StateId>(s));
  }
  return out;
}

}  // namespace

DpResult backward_induction(const Mdp& m, const WealthSpace& space, Wealth target, bool strict,
                            const DpOptions& options) {
  if (!m.finite_horizon()) {
    throw PreconditionError("backward induction needs a finite horizon; use value_iteration");
  }
  const int horizon = *m.horizon();
  const auto n = static_cast<std::size_t>(m.n_states());

  std::vector<std::vector<char>> active;
  if (options.prune_unreachable) {
    active = reachable_states(m, horizon);
  } else {
    active.assign(static_cast<std::size_t>(horizon) + 1, std::vector<char>(n, 1));
  }

  DpResult result;
  ValueFunction& vf = result.values;
  vf.stationary = false;
  vf.slices.assign(static_cast<std::size_t>(horizon) + 1, std::vector<StepFunction>(n));
  vf.computed.assign(static_cast<std::size_t>(horizon) + 1, std::vector<char>(n, 0));
  vf.windows.resize(static_cast<std::size_t>(horizon) + 1);

  const StepFunction terminal = target_utility(target, strict);
  std::fill(vf.slices[horizon].begin(), vf.slices[horizon].end(), terminal);
  std::fill(vf.computed[horizon].begin(), vf.computed[horizon].end(), 1);
  vf.windows[horizon] = step_window(m, space, horizon, options.clip_to_reachable);

  std::vector<std::vector<DecisionRule>> rules(static_cast<std::size_t>(horizon),
                                               std::vector<DecisionRule>(n));
  for (int t = horizon - 1; t >= 0; --t) {
    vf.windows[t] = step_window(m, space, t, options.clip_to_reachable);
    BellmanSweep sweep(m, space, vf.slices[t + 1], t, vf.windows[t]);
    sweep.prepare(active[t]);
    const auto states = active_list(active[t]);
    detail::parallel_for(states.size(), [&](std::size_t i) {
      const StateId s = states[i];
      Envelope env = sweep.envelope(s);
      vf.slices[t][s] = std::move(env.value);
      rules[t][s] = std::move(env.argmax);
      vf.computed[t][s] = 1;
    });
    for (StateId s : states) record(result.stats, vf.slices[t][s]);
    if (!options.keep_values && t + 1 < horizon) {
      vf.slices[t + 1] = std::vector<StepFunction>(n);
    }
  }

  result.probability = vf.slices[0][m.initial_state()](space.w0());
  result.policy = WealthMarkovPolicy(std::move(rules), false);
  if (!options.keep_values) result.values = ValueFunction{};
  return result;
}

RewardSign reward_sign(const Mdp& m) {
  bool negative = false;
  bool positive = false;
  for (StateId s = 0; s < m.n_states(); ++s) {
    for (ActionId a = 0; a < m.n_actions(); ++a) {
      for (const auto& e : m.row(s, a)) {
        if (e.probability <= 0.0) continue;
        negative = negative || e.reward < 0.0;
        positive = positive || e.reward > 0.0;
      }
    }
  }
  if (negative && positive) return RewardSign::Mixed;
  if (negative) return RewardSign::NonPositive;
  if (positive) return RewardSign::NonNegative;
  return RewardSign::Zero;
}

ValueIterationResult value_iteration(const Mdp& m, const WealthSpace& space, Wealth target,
                                     bool strict, const ValueIterationOptions& options) {
  if (space.kind() != WealthKind::Additive) {
    throw PreconditionError("functional value iteration requires undiscounted additive wealth");
  }
  if (!(options.eps_conv > 0.0) || options.max_sweeps < 1) {
    throw ArgumentError("value iteration needs eps_conv > 0 and max_sweeps >= 1");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Window window;
  switch (reward_sign(m)) {
    case RewardSign::Mixed:
      throw PreconditionError(
          "functional value iteration requires rewards that are all <= 0 or all >= 0");
    case RewardSign::NonPositive:
      window = widen({-inf, space.w0()});
      break;
    case RewardSign::NonNegative:
      window = widen({space.w0(), inf});
      break;
    case RewardSign::Zero:
      window = widen({space.w0(), space.w0()});
      break;
  }

  const auto n = static_cast<std::size_t>(m.n_states());
  const std::vector<char> all(n, 1);
  std::vector<StepFunction> values(n, target_utility(target, strict).clipped(window.lo, window.hi));

  ValueIterationResult result;
  for (int sweep_no = 1; sweep_no <= options.max_sweeps; ++sweep_no) {
    BellmanSweep sweep(m, space, values, 0, window);
    sweep.prepare(all);
    std::vector<StepFunction> next(n);
    detail::parallel_for(n, [&](std::size_t s) {
      next[s] = sweep.envelope(static_cast<StateId>(s)).value;
    });
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      residual = std::max(residual, sup_distance(next[s], values[s]));
    }
    values = std::move(next);
    result.residuals.push_back(residual);
    result.sweeps = sweep_no;
    result.residual = residual;
    if (residual <= options.eps_conv) {
      result.values.stationary = true;
      result.values.slices = {std::move(values)};
      result.values.computed = {all};
      result.values.windows = {window};
      result.probability = result.values.slices[0][m.initial_state()](space.w0());
      result.policy = extract_policy(result.values, m, space);
      return result;
    }
  }
  throw ConvergenceError("functional value iteration did not converge in " +
                             std::to_string(options.max_sweeps) +
                             " sweeps; last residual " + std::to_string(result.residual),
                         result.residual);
}

WealthMarkovPolicy extract_policy(const ValueFunction& vf, const Mdp& m,
                                  const WealthSpace& space) {
  const auto n = static_cast<std::size_t>(m.n_states());
  if (vf.stationary) {
    if (vf.layers() != 1) throw ArgumentError("stationary value function needs one layer");
    BellmanSweep sweep(m, space, vf.slices[0], 0, vf.windows[0]);
    const std::vector<char> all(n, 1);
    sweep.prepare(all);
    std::vector<DecisionRule> layer(n);
    detail::parallel_for(n, [&](std::size_t s) {
      layer[s] = sweep.envelope(static_cast<StateId>(s)).argmax;
    });
    return WealthMarkovPolicy({std::move(layer)}, true);
  }
  if (vf.layers() < 1) throw ArgumentError("value function has no layers");
  const int horizon = vf.layers() - 1;
  std::vector<std::vector<DecisionRule>> rules(static_cast<std::size_t>(horizon),
                                               std::vector<DecisionRule>(n));
  for (int t = 0; t < horizon; ++t) {
    BellmanSweep sweep(m, space, vf.slices[t + 1], t, vf.windows[t]);
    sweep.prepare(vf.computed[t]);
    const auto states = active_list(vf.computed[t]);
    detail::parallel_for(states.size(), [&](std::size_t i) {
      rules[t][states[i]] = sweep.envelope(states[i]).argmax;
    });
  }
  return WealthMarkovPolicy(std::move(rules), false);
}

}  // namespace qmdp
