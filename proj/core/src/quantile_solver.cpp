#include "qmdp/quantile_solver.hpp"

#include <cmath>
#include <string>

#include "qmdp/errors.hpp"
#include "qmdp/evaluation.hpp"

namespace qmdp {

void validate(const QuantileQuery& q) {
  check_tau(q.tau, q.criterion);
  if (!(q.epsilon > 0.0) || !std::isfinite(q.epsilon)) {
    throw ArgumentError("epsilon must be positive and finite");
  }
  if (q.quantile_bounds) {
    const auto [lo, hi] = *q.quantile_bounds;
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw ArgumentError("quantile bounds must be finite with lo <= hi");
    }
  }
  if (q.value_iteration.eps_conv <= 0.0 || q.value_iteration.max_sweeps < 1) {
    throw ArgumentError("value iteration needs eps_conv > 0 and at least one sweep");
  }
}

int iteration_bound(const WealthSpace& space, const WealthBounds& bracket, double epsilon) {
  if (space.kind() == WealthKind::Ordinal) {
    const int m = space.class_index(bracket.hi) - space.class_index(bracket.lo) + 1;
    return m <= 1 ? 0 : static_cast<int>(std::ceil(std::log2(static_cast<double>(m))));
  }
  const double d = space.distance(bracket.lo, bracket.hi);
  if (d <= epsilon) return 0;
  return static_cast<int>(std::ceil(std::log2(d / epsilon)));
}

namespace {

struct Test {
  double p;
  bool accepted;
  WealthMarkovPolicy policy;
};

class Search {
 public:
  Search(const Mdp& m, const WealthSpace& space, const QuantileQuery& q)
      : m_(m), space_(space), q_(q), lower_(q.criterion == QuantileCriterion::Lower) {}

  Test run(Wealth w) {
    const bool strict = lower_;
    double p = 0.0;
    WealthMarkovPolicy policy;
    if (q_.horizon_mode == HorizonMode::Infinite) {
      auto r = value_iteration(m_, space_, w, strict, q_.value_iteration);
      p = r.probability;
      policy = std::move(r.policy);
    } else {
      DpOptions options;
      options.keep_values = false;
      auto r = backward_induction(m_, space_, w, strict, options);
      p = r.probability;
      policy = std::move(r.policy);
    }
    const double target = 1.0 - q_.tau;
    const bool accepted =
        lower_ ? p > target + kProbabilityTolerance : p >= target - kProbabilityTolerance;
    return {p, accepted, std::move(policy)};
  }

 private:
  const Mdp& m_;
  const WealthSpace& space_;
  const QuantileQuery& q_;
  bool lower_;
};

WealthBounds initial_bracket(const Mdp& m, const WealthSpace& space, const QuantileQuery& q) {
  if (q.horizon_mode == HorizonMode::Finite) {
    if (!m.finite_horizon()) {
      throw ArgumentError("finite-horizon solve on a model without a horizon");
    }
  } else {
    if (m.finite_horizon()) {
      throw ArgumentError("infinite-horizon solve on a model with a finite horizon");
    }
    if (space.kind() != WealthKind::Additive) {
      throw PreconditionError("infinite horizons are supported for additive wealth only");
    }
    if (reward_sign(m) == RewardSign::Mixed) {
      throw PreconditionError("infinite horizons need rewards of one sign");
    }
  }
  WealthBounds b = q.quantile_bounds ? *q.quantile_bounds : wealth_bounds(m, space);
  if (!std::isfinite(b.lo)) {
    throw PreconditionError("the wealth range has no finite lower end: supply quantile bounds");
  }
  if (!std::isfinite(b.hi)) {
    throw PreconditionError("the wealth range has no finite upper end: supply quantile bounds");
  }
  if (space.kind() == WealthKind::Ordinal) {
    space.class_index(b.lo);
    space.class_index(b.hi);
  }
  return b;
}

}  // namespace

SolveReport solve_quantile(const Mdp& m, const WealthSpace& space, const QuantileQuery& q) {
  validate(q);
  if (const auto violations = validate(m); !violations.empty()) {
    throw ConfigError("invalid model: " + violations.front().message);
  }
  const bool ordinal = space.kind() == WealthKind::Ordinal;
  const double epsilon = ordinal ? 1.0 : q.epsilon;

  SolveReport report;
  report.bracket = initial_bracket(m, space, q);
  report.iteration_bound = iteration_bound(space, report.bracket, epsilon);

  Search search(m, space, q);
  Wealth& lo = report.bracket.lo;
  Wealth& hi = report.bracket.hi;
  bool have_policy = false;
  bool hi_tested = false;

  auto record = [&](Wealth w, const Test& t) { report.log.push_back({w, t.p, t.accepted}); };

  Wealth w = space.mid(lo, hi).greatest;
  while (space.distance(lo, hi) > epsilon) {
    if (!(w > lo && w < hi) && !ordinal) break;
    Test t = search.run(w);
    record(w, t);
    ++report.iterations;
    if (t.accepted) {
      lo = w;
      report.policy = std::move(t.policy);
      have_policy = true;
    } else {
      hi = w;
      hi_tested = true;
    }
    const MidElements mid = space.mid(lo, hi);
    w = t.accepted ? mid.greatest : mid.least;
  }
  report.quantile_estimate = lo;

  if (ordinal) {
    if (q.criterion == QuantileCriterion::Lower) {
      // Optimum is hi when some policy clears prec(hi), and the least class otherwise.
      const Wealth below = space.prec(hi);
      Test t = search.run(below);
      record(below, t);
      ++report.extra_solves;
      report.policy = std::move(t.policy);
      have_policy = true;
      if (t.accepted && below < hi) {
        lo = below;
        report.quantile_estimate = hi;
      } else {
        hi = lo;
        report.quantile_estimate = lo;
        report.at_bottom = !t.accepted;
      }
    } else {
      if (!hi_tested && hi > lo) {
        Test t = search.run(hi);
        record(hi, t);
        ++report.extra_solves;
        if (t.accepted) {
          lo = hi;
          report.policy = std::move(t.policy);
          have_policy = true;
        }
      }
      report.quantile_estimate = lo;
      hi = lo;
    }
  }

  if (!have_policy) {
    Test t = search.run(lo);
    record(lo, t);
    ++report.extra_solves;
    report.policy = std::move(t.policy);
    report.at_bottom = true;
  }
  return report;
}

bool quantile_certificate(const Mdp& m, const WealthSpace& space, const SolveReport& report,
                          const QuantileQuery& q) {
  const bool ordinal = space.kind() == WealthKind::Ordinal;
  const double epsilon = ordinal ? 1.0 : q.epsilon;
  const Wealth lo = report.bracket.lo;
  const bool close = space.distance(lo, report.bracket.hi) <= epsilon;
  if (report.at_bottom) return close;

  EvalOptions options;
  if (!m.finite_horizon()) {
    throw ArgumentError("certificates need a finite evaluation horizon");
  }
  const WealthDistribution d = exact_distribution(m, space, report.policy, options);
  if (q.criterion == QuantileCriterion::Lower) {
    return close && cdf(d, lo) < q.tau - kProbabilityTolerance;
  }
  return close && decumulative(d, lo) >= 1.0 - q.tau - kProbabilityTolerance;
}

}  // namespace qmdp
