#include "qmdp/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmdp/errors.hpp"

namespace qmdp {

namespace {

struct Event {
  Wealth at;
  bool inclusive;
  int term;
  double value;
};

bool position_less(Wealth a_at, bool a_incl, Wealth b_at, bool b_incl) {
  if (a_at != b_at) return a_at < b_at;
  return a_incl && !b_incl;
}

// Sorts events by position, snapping positions closer than kWealthTolerance
// to the first position of their cluster.
void order_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.at < b.at; });
  if (events.empty()) return;
  Wealth cluster = events.front().at;
  for (auto& e : events) {
    if (e.at - cluster <= kWealthTolerance) {
      e.at = cluster;
    } else {
      cluster = e.at;
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return position_less(a.at, a.inclusive, b.at, b.inclusive);
  });
}

// Calls on_group(at, inclusive) after applying each group of events sharing
// a position; `values[term]` holds the current value of every term.
template <class OnGroup>
void sweep(const std::vector<Event>& events, std::vector<double>& values, OnGroup&& on_group) {
  std::size_t i = 0;
  while (i < events.size()) {
    const Wealth at = events[i].at;
    const bool inclusive = events[i].inclusive;
    while (i < events.size() && events[i].at == at && events[i].inclusive == inclusive) {
      values[events[i].term] = events[i].value;
      ++i;
    }
    on_group(at, inclusive);
  }
}

double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

// Index of the first step not reached by x.
std::size_t reached_count(std::span<const Step> steps, Wealth x, double offset) {
  const auto it = std::partition_point(steps.begin(), steps.end(), [&](const Step& s) {
    return reaches(x, s.at - offset, s.inclusive);
  });
  return static_cast<std::size_t>(it - steps.begin());
}

}  // namespace

StepFunction::StepFunction(double base, std::vector<Step> steps) : base_(base) {
  std::vector<Event> events;
  events.reserve(steps.size());
  for (const auto& s : steps) events.push_back({s.at, s.inclusive, 0, s.value});
  order_events(events);
  std::vector<double> values{base};
  double current = base;
  sweep(events, values, [&](Wealth at, bool inclusive) {
    if (std::abs(values[0] - current) > kValueTolerance) {
      steps_.push_back({at, inclusive, values[0]});
      current = values[0];
    }
  });
}

StepFunction StepFunction::adopt(double base, std::vector<Step> steps) {
  StepFunction f(base);
  f.steps_ = std::move(steps);
  return f;
}

double StepFunction::operator()(Wealth w) const {
  const std::size_t k = reached_count(steps_, w, 0.0);
  return k == 0 ? base_ : steps_[k - 1].value;
}

StepFunction StepFunction::translated(double offset) const {
  StepFunction g = *this;
  if (offset != 0.0) {
    for (auto& s : g.steps_) s.at -= offset;
  }
  return g;
}

StepFunction StepFunction::clipped(Wealth lo, Wealth hi) const {
  StepFunction g(base_);
  const std::size_t first = reached_count(steps_, lo, 0.0);
  const std::size_t last = reached_count(steps_, hi, 0.0);
  if (first > 0) g.base_ = steps_[first - 1].value;
  double current = g.base_;
  for (std::size_t k = first; k < last; ++k) {
    if (std::abs(steps_[k].value - current) > kValueTolerance) {
      g.steps_.push_back(steps_[k]);
      current = steps_[k].value;
    }
  }
  return g;
}

bool StepFunction::is_nondecreasing() const {
  double current = base_;
  for (const auto& s : steps_) {
    if (s.value < current - kValueTolerance) return false;
    current = s.value;
  }
  return true;
}

StepFunction target_utility(Wealth w, bool strict) {
  return StepFunction(0.0, {Step{w, !strict, 1.0}});
}

double eval(const StepFunction& f, Wealth w) { return f(w); }

StepFunction shift(const StepFunction& f, Reward r, int t, const WealthSpace& space) {
  if (space.kind() != WealthKind::Ordinal) {
    return f.translated(space.step_weight(t) * r);
  }
  if (space.transition_table().empty() || space.labels().empty()) {
    throw ConfigError("ordinal shift requires a class transition table");
  }
  const int m = space.class_count();
  std::vector<Step> steps;
  const double base = f(space.accumulate(space.class_wealth(0), r, t));
  double previous = base;
  for (int i = 1; i < m; ++i) {
    const double v = f(space.accumulate(space.class_wealth(i), r, t));
    if (std::abs(v - previous) > kValueTolerance) steps.push_back({space.class_wealth(i), true, v});
    previous = v;
  }
  return StepFunction::adopt(base, std::move(steps));
}

StepFunction combine(std::span<const WeightedTerm> terms) { return combine(terms, Window{}); }

StepFunction combine(std::span<const WeightedTerm> terms, const Window& window) {
  if (terms.empty()) throw ArgumentError("combine needs at least one term");
  double total = 0.0;
  for (const auto& term : terms) {
    if (!(term.weight >= 0.0)) throw ArgumentError("combine weights must be nonnegative");
    total += term.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ArgumentError("combine weights sum to " + std::to_string(total) + ", expected 1");
  }

  std::vector<double> values(terms.size());
  std::vector<Event> events;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto steps = terms[i].function->steps();
    const double offset = terms[i].offset;
    const std::size_t first = reached_count(steps, window.lo, offset);
    const std::size_t last = reached_count(steps, window.hi, offset);
    values[i] = first == 0 ? terms[i].function->base() : steps[first - 1].value;
    for (std::size_t k = first; k < last; ++k) {
      events.push_back({steps[k].at - offset, steps[k].inclusive, static_cast<int>(i),
                        steps[k].value});
    }
  }
  order_events(events);

  auto weighted = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) sum += terms[i].weight * values[i];
    return clamp_probability(sum);
  };

  const double base = weighted();
  std::vector<Step> steps;
  double current = base;
  sweep(events, values, [&](Wealth at, bool inclusive) {
    const double v = weighted();
    if (std::abs(v - current) > kValueTolerance) {
      steps.push_back({at, inclusive, v});
      current = v;
    }
  });

  return StepFunction::adopt(base, std::move(steps));
}

Envelope pointwise_max(std::span<const StepFunction> fs) {
  if (fs.empty()) throw ArgumentError("pointwise_max needs at least one function");
  std::vector<double> values(fs.size());
  std::vector<Event> events;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    values[i] = fs[i].base();
    for (const auto& s : fs[i].steps()) {
      events.push_back({s.at, s.inclusive, static_cast<int>(i), s.value});
    }
  }
  order_events(events);

  auto best = [&] {
    const double top = *std::max_element(values.begin(), values.end());
    int arg = 0;
    while (values[arg] < top - kValueTolerance) ++arg;
    return std::pair{top, arg};
  };

  const auto [base, base_action] = best();
  std::vector<Step> steps;
  std::vector<ActionInterval> intervals;
  double current = base;
  int action = base_action;
  sweep(events, values, [&](Wealth at, bool inclusive) {
    const auto [v, a] = best();
    if (std::abs(v - current) > kValueTolerance) {
      steps.push_back({at, inclusive, v});
      current = v;
    }
    if (a != action) {
      intervals.push_back({at, inclusive, a});
      action = a;
    }
  });

  Envelope env;
  env.value = StepFunction::adopt(base, std::move(steps));
  env.argmax = DecisionRule(base_action, std::move(intervals));
  return env;
}

double sup_distance(const StepFunction& f, const StepFunction& g) {
  std::vector<double> values{f.base(), g.base()};
  std::vector<Event> events;
  events.reserve(f.steps().size() + g.steps().size());
  for (const auto& s : f.steps()) events.push_back({s.at, s.inclusive, 0, s.value});
  for (const auto& s : g.steps()) events.push_back({s.at, s.inclusive, 1, s.value});
  order_events(events);
  double best = std::abs(values[0] - values[1]);
  sweep(events, values, [&](Wealth, bool) {
    best = std::max(best, std::abs(values[0] - values[1]));
  });
  return best;
}

}  // namespace qmdp
