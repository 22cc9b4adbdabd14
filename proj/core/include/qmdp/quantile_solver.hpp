#pragma once

#include <optional>
#include <vector>

#include "qmdp/distribution.hpp"
#include "qmdp/functional_dp.hpp"
#include "qmdp/mdp.hpp"
#include "qmdp/policy.hpp"

namespace qmdp {

enum class HorizonMode { Finite, Infinite };

struct QuantileQuery {
  double tau = 0.5;
  QuantileCriterion criterion = QuantileCriterion::Lower;
  /// Ignored by ordinal spaces, which search class by class.
  double epsilon = 1e-3;
  HorizonMode horizon_mode = HorizonMode::Finite;
  /// Overrides (w_min, w_max). Infinite horizons need the side that is unbounded.
  std::optional<WealthBounds> quantile_bounds;
  ValueIterationOptions value_iteration;
};

struct SearchStep {
  Wealth w;
  double p;
  bool accepted;
};

struct SolveReport {
  WealthMarkovPolicy policy;
  /// Ordinal spaces: the optimal quantile. Numeric spaces: the bracket's lower
  /// end, a level the returned policy's quantile is guaranteed to reach.
  Wealth quantile_estimate = 0.0;
  WealthBounds bracket{0.0, 0.0};
  int iterations = 0;
  /// Solves run after the search (prec correction, top-class check).
  int extra_solves = 0;
  int iteration_bound = 0;
  /// No test succeeded: the optimum sits at the bottom of the range.
  bool at_bottom = false;
  std::vector<SearchStep> log;
};

void validate(const QuantileQuery& q);

/// Maximal number of binary-search iterations for the bracket.
int iteration_bound(const WealthSpace& space, const WealthBounds& bracket, double epsilon);

/// Binary search over wealth thresholds; each test maximizes P[w < W]
/// (lower) or P[w <= W] (upper) with functional dynamic programming.
SolveReport solve_quantile(const Mdp& m, const WealthSpace& space, const QuantileQuery& q);

/// Re-evaluates the returned policy exactly and checks the epsilon-optimality
/// condition at the bracket's lower end.
bool quantile_certificate(const Mdp& m, const WealthSpace& space, const SolveReport& report,
                          const QuantileQuery& q);

}  // namespace qmdp
