#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qmdp/policy.hpp"
#include "qmdp/wealth_space.hpp"

namespace qmdp {

/// Values closer than this are merged into one piece.
inline constexpr double kValueTolerance = 1e-12;

/// Start of a piece: from `at` (inclusive or not) the function equals `value`
/// until the next step.
struct Step {
  Wealth at;
  bool inclusive;
  double value;

  bool operator==(const Step&) const = default;
};

/// Piecewise-constant map from wealth to [0, 1].
///
/// Steps are sorted by position, an inclusive step at `x` preceding an
/// exclusive one at the same `x`. Adjacent pieces always differ by more than
/// kValueTolerance.
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(double base) : base_(base) {}
  /// Builds the canonical form of the given steps (sorted, merged).
  StepFunction(double base, std::vector<Step> steps);
  /// Adopts steps that are already canonical.
  static StepFunction adopt(double base, std::vector<Step> steps);

  double base() const noexcept { return base_; }
  std::span<const Step> steps() const noexcept { return steps_; }
  std::size_t piece_count() const noexcept { return steps_.size() + 1; }

  double operator()(Wealth w) const;

  /// g(x) = f(x + offset).
  StepFunction translated(double offset) const;
  /// Restricts to [lo, hi]: outside the window the function is extended by
  /// its values at the window edges.
  StepFunction clipped(Wealth lo, Wealth hi) const;

  bool is_nondecreasing() const;

  bool operator==(const StepFunction&) const = default;

 private:
  double base_ = 0.0;
  std::vector<Step> steps_;
};

/// Indicator of {x : w < x} (strict) or {x : w <= x}.
StepFunction target_utility(Wealth w, bool strict);
double eval(const StepFunction& f, Wealth w);

/// g(w) = f(w o r) with the reward collected at step t.
///
/// Numeric spaces translate every threshold by -gamma^t r. Ordinal spaces
/// pull the function back through the class transition table and return an
/// inclusive step at each class index where the value changes.
StepFunction shift(const StepFunction& f, Reward r, int t, const WealthSpace& space);

struct WeightedTerm {
  double weight;
  const StepFunction* function;
  /// Evaluate the term at x + offset.
  double offset = 0.0;
};

/// Range of wealth in which a computed function must be exact.
struct Window {
  Wealth lo = -std::numeric_limits<double>::infinity();
  Wealth hi = std::numeric_limits<double>::infinity();
};

/// Pointwise convex combination. Weights must be nonnegative and sum to 1.
StepFunction combine(std::span<const WeightedTerm> terms);
/// Same as combine, exact only on `window`.
StepFunction combine(std::span<const WeightedTerm> terms, const Window& window);

struct Envelope {
  StepFunction value;
  /// Lowest action index attaining the maximum on each interval.
  DecisionRule argmax;
};

/// Upper envelope of a nonempty list; actions are the list indices.
Envelope pointwise_max(std::span<const StepFunction> fs);

/// Exact sup-norm of f - g.
double sup_distance(const StepFunction& f, const StepFunction& g);

}  // namespace qmdp
