#include "qmdp/distribution.hpp"

#include <algorithm>
#include <string>

#include "qmdp/errors.hpp"

namespace qmdp {

QuantileCriterion parse_criterion(std::string_view name) {
  if (name == "lower") return QuantileCriterion::Lower;
  if (name == "upper") return QuantileCriterion::Upper;
  throw ArgumentError("criterion must be 'lower' or 'upper', got '" + std::string(name) + "'");
}

std::string_view to_string(QuantileCriterion c) {
  return c == QuantileCriterion::Lower ? "lower" : "upper";
}

WealthDistribution WealthDistribution::from_atoms(std::vector<Atom> atoms) {
  std::erase_if(atoms, [](const Atom& a) { return !(a.probability > 0.0); });
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.wealth < b.wealth; });
  WealthDistribution d;
  for (const auto& a : atoms) {
    if (!d.atoms_.empty() && a.wealth - d.atoms_.back().wealth <= kWealthTolerance) {
      d.atoms_.back().probability += a.probability;
    } else {
      d.atoms_.push_back(a);
    }
  }
  return d;
}

double WealthDistribution::total_probability() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.probability;
  return total;
}

double WealthDistribution::mean() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.wealth * a.probability;
  return total;
}

double cdf(const WealthDistribution& d, Wealth w) {
  double total = 0.0;
  for (const auto& a : d.atoms()) {
    if (!reaches(w, a.wealth, true)) break;
    total += a.probability;
  }
  return std::min(total, 1.0);
}

double decumulative(const WealthDistribution& d, Wealth w) {
  double total = 0.0;
  for (const auto& a : d.atoms()) {
    if (reaches(a.wealth, w, true)) total += a.probability;
  }
  return std::min(total, 1.0);
}

double strict_decumulative(const WealthDistribution& d, Wealth w) {
  double total = 0.0;
  for (const auto& a : d.atoms()) {
    if (reaches(a.wealth, w, false)) total += a.probability;
  }
  return std::min(total, 1.0);
}

void check_tau(double tau, QuantileCriterion criterion) {
  const bool ok = criterion == QuantileCriterion::Lower ? (tau > 0.0 && tau <= 1.0)
                                                        : (tau >= 0.0 && tau < 1.0);
  if (!ok) {
    throw ArgumentError("tau = " + std::to_string(tau) + " is outside the range of the " +
                        std::string(to_string(criterion)) + " quantile");
  }
}

Wealth quantile(const WealthDistribution& d, double tau, QuantileCriterion criterion) {
  check_tau(tau, criterion);
  const auto atoms = d.atoms();
  if (atoms.empty()) throw ArgumentError("quantile of an empty distribution");
  if (criterion == QuantileCriterion::Lower) {
    double cumulative = 0.0;
    for (const auto& a : atoms) {
      cumulative += a.probability;
      if (cumulative >= tau - kProbabilityTolerance) return a.wealth;
    }
    return atoms.back().wealth;
  }
  double tail = 0.0;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    tail += it->probability;
    if (tail >= 1.0 - tau - kProbabilityTolerance) return it->wealth;
  }
  return atoms.front().wealth;
}

}  // namespace qmdp
