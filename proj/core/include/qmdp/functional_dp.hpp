#pragma once

#include <cstddef>
#include <vector>

#include "qmdp/mdp.hpp"
#include "qmdp/policy.hpp"
#include "qmdp/step_function.hpp"

namespace qmdp {

/// Value slices V_t(s, .) for t = 0..T (finite) or one converged layer.
struct ValueFunction {
  bool stationary = false;
  std::vector<std::vector<StepFunction>> slices;
  /// Slices actually computed; the others are placeholders and never read
  /// by a forward pass from the initial state.
  std::vector<std::vector<char>> computed;
  /// Wealth range on which layer t is exact.
  std::vector<Window> windows;

  const StepFunction& at(int t, int s) const { return slices.at(t).at(s); }
  int layers() const noexcept { return static_cast<int>(slices.size()); }
};

struct DpOptions {
  /// Only compute slices of states reachable at each step.
  bool prune_unreachable = true;
  /// Restrict every slice to the wealth reachable at its step.
  bool clip_to_reachable = true;
  bool keep_values = true;
};

struct DpStats {
  std::size_t max_pieces = 0;
  std::size_t total_pieces = 0;
};

struct DpResult {
  WealthMarkovPolicy policy;
  /// V_0(s0, w0) = max over policies of P[w <| wealth(H_T)].
  double probability = 0.0;
  ValueFunction values;
  DpStats stats;
};

/// Functional backward induction with the target utility at `target`.
/// Steps are 0-based: the decision at step t sees the wealth of t rewards.
DpResult backward_induction(const Mdp& m, const WealthSpace& space, Wealth target,
                            bool strict, const DpOptions& options = {});

struct ValueIterationOptions {
  double eps_conv = 1e-6;
  int max_sweeps = 10000;
};

struct ValueIterationResult {
  WealthMarkovPolicy policy;  ///< stationary
  double probability = 0.0;
  int sweeps = 0;
  double residual = 0.0;
  /// Residual after each sweep.
  std::vector<double> residuals;
  ValueFunction values;
};

/// Sign class of the rewards of an infinite-horizon model.
enum class RewardSign { NonPositive, NonNegative, Zero, Mixed };
RewardSign reward_sign(const Mdp& m);

/// Functional value iteration for undiscounted additive wealth with rewards
/// of one sign. Throws PreconditionError otherwise and ConvergenceError when
/// the sweep budget runs out.
ValueIterationResult value_iteration(const Mdp& m, const WealthSpace& space, Wealth target,
                                     bool strict, const ValueIterationOptions& options = {});

/// Greedy policy of a value function; lowest action index on ties.
WealthMarkovPolicy extract_policy(const ValueFunction& vf, const Mdp& m,
                                  const WealthSpace& space);

}  // namespace qmdp
