#pragma once

#include <compare>
#include <string>
#include <vector>

namespace qmdp {

/// Wealth levels are stored as doubles. Ordinal spaces use the class index.
using Wealth = double;
/// Rewards are numeric, or a label index into the transition table for ordinal spaces.
using Reward = double;

/// Absolute tolerance under which two numeric wealth levels denote the same level.
inline constexpr double kWealthTolerance = 1e-9;
/// Tolerance used when comparing probabilities against quantile levels.
inline constexpr double kProbabilityTolerance = 1e-12;

enum class WealthKind { Additive, Discounted, Ordinal };

/// True when wealth `x` lies at or beyond a threshold placed at `at`.
///
/// Exclusive thresholds are reached only strictly above `at`. Positions
/// closer than kWealthTolerance count as equal, so the step-function algebra
/// and the forward evaluators agree on ties produced by rounding.
inline bool reaches(Wealth x, Wealth at, bool inclusive) {
  const double gap = x - at;
  return gap > kWealthTolerance || (inclusive && gap >= -kWealthTolerance);
}

struct MidElements {
  Wealth least;
  Wealth greatest;
};

struct WealthBounds {
  Wealth lo;
  Wealth hi;
};

/// The ordered space in which history values accumulate.
///
/// Additive spaces sum rewards, discounted spaces weight the reward of step t
/// by gamma^t, and ordinal spaces move between ordered classes through a
/// user-supplied (class, reward label) -> class table.
class WealthSpace {
 public:
  static WealthSpace additive();
  static WealthSpace discounted(double gamma);
  /// `table[c][l]` is the class reached from class c on reward label l.
  static WealthSpace ordinal(std::vector<std::string> classes,
                             std::vector<std::string> labels,
                             std::vector<std::vector<int>> table,
                             int initial_class = 0);

  WealthKind kind() const noexcept { return kind_; }
  bool is_numeric() const noexcept { return kind_ != WealthKind::Ordinal; }
  Wealth w0() const noexcept { return w0_; }
  double gamma() const noexcept { return gamma_; }

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<int>>& transition_table() const noexcept { return table_; }
  int class_count() const noexcept { return static_cast<int>(classes_.size()); }

  Wealth accumulate(Wealth w, Reward r, int t) const;
  /// Weight applied to a reward collected at step t (1 for additive spaces).
  double step_weight(int t) const;

  std::strong_ordering compare(Wealth a, Wealth b) const;
  double distance(Wealth a, Wealth b) const;
  MidElements mid(Wealth lo, Wealth hi) const;
  /// Immediate predecessor class; the least class is its own predecessor.
  Wealth prec(Wealth w) const;

  int class_index(Wealth w) const;
  Wealth class_wealth(int index) const { return static_cast<Wealth>(index); }
  int class_of(const std::string& name) const;
  int label_of(const std::string& name) const;

 private:
  WealthKind kind_ = WealthKind::Additive;
  Wealth w0_ = 0.0;
  double gamma_ = 1.0;
  std::vector<std::string> classes_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
};

}  // namespace qmdp
