#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmdp/distribution.hpp"
#include "qmdp/mdp.hpp"
#include "qmdp/policy.hpp"

namespace qmdp {

struct EvalOptions {
  /// Overrides the model horizon; required for infinite-horizon models.
  std::optional<int> horizon;
  std::size_t atom_cap = 10'000'000;
};

/// Exact terminal wealth distribution of `pi` from (s0, w0).
/// Throws ResourceError when the reachable (step, state, wealth) atoms exceed the cap.
WealthDistribution exact_distribution(const Mdp& m, const WealthSpace& space,
                                      const WealthMarkovPolicy& pi,
                                      const EvalOptions& options = {});

/// `n` i.i.d. episode wealths. Episodes are split in contiguous blocks over
/// `workers`; block k draws from a generator seeded with seed + k.
std::vector<Wealth> simulate(const Mdp& m, const WealthSpace& space,
                             const WealthMarkovPolicy& pi, std::size_t n, std::uint64_t seed,
                             int workers = 1, std::optional<int> horizon = std::nullopt);

struct OracleResult {
  Wealth quantile;
  WealthMarkovPolicy policy;
  std::size_t policies_enumerated = 0;
};

/// Exhaustive search over deterministic wealth-Markovian policies, branching
/// only on (step, state, wealth) atoms reachable under the choices made so far.
/// Throws ResourceError beyond `policy_cap` complete policies.
OracleResult brute_force_optimal_quantile(const Mdp& m, const WealthSpace& space, double tau,
                                          QuantileCriterion criterion,
                                          std::size_t policy_cap = 1'000'000);

/// Expectation-optimal deterministic Markovian policy.
struct StandardSolution {
  /// actions[t][s] for t = 0..T-1.
  std::vector<std::vector<int>> actions;
  /// values[t][s] for t = 0..T, values[T] = 0.
  std::vector<std::vector<double>> values;

  WealthMarkovPolicy as_policy() const;
};

/// Classic Bellman backward induction on expected (optionally discounted) reward.
StandardSolution standard_backward_induction(const Mdp& m, double discount = 1.0);

}  // namespace qmdp
