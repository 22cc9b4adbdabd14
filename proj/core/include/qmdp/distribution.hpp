#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qmdp/wealth_space.hpp"

namespace qmdp {

enum class QuantileCriterion { Lower, Upper };

QuantileCriterion parse_criterion(std::string_view name);
std::string_view to_string(QuantileCriterion c);

struct Atom {
  Wealth wealth;
  double probability;
};

/// Finite distribution over wealth levels, atoms sorted and merged.
class WealthDistribution {
 public:
  WealthDistribution() = default;
  /// Sorts, drops zero-probability atoms and merges atoms closer than
  /// kWealthTolerance into the smaller representative.
  static WealthDistribution from_atoms(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_probability() const;
  double mean() const;

 private:
  std::vector<Atom> atoms_;
};

/// F(w) = P[W <= w].
double cdf(const WealthDistribution& d, Wealth w);
/// G(w) = P[W >= w].
double decumulative(const WealthDistribution& d, Wealth w);
/// G_<(w) = P[W > w] = 1 - F(w).
double strict_decumulative(const WealthDistribution& d, Wealth w);

/// Lower: least w with F(w) >= tau, tau in (0, 1].
/// Upper: greatest w with G(w) >= 1 - tau, tau in [0, 1).
Wealth quantile(const WealthDistribution& d, double tau, QuantileCriterion criterion);

void check_tau(double tau, QuantileCriterion criterion);

}  // namespace qmdp
