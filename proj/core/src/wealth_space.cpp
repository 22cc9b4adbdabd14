#include "qmdp/wealth_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmdp/errors.hpp"

namespace qmdp {

WealthSpace WealthSpace::additive() { return WealthSpace{}; }

WealthSpace WealthSpace::discounted(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ConfigError("discount factor must lie in (0, 1], got " + std::to_string(gamma));
  }
  WealthSpace space;
  space.kind_ = WealthKind::Discounted;
  space.gamma_ = gamma;
  return space;
}

WealthSpace WealthSpace::ordinal(std::vector<std::string> classes,
                                 std::vector<std::string> labels,
                                 std::vector<std::vector<int>> table, int initial_class) {
  const int m = static_cast<int>(classes.size());
  if (m == 0) throw ConfigError("ordinal wealth space needs at least one class");
  if (initial_class < 0 || initial_class >= m) {
    throw ConfigError("initial wealth class out of range");
  }
  if (static_cast<int>(table.size()) != m) {
    throw ConfigError("transition table needs one row per wealth class");
  }
  for (const auto& row : table) {
    if (row.size() != labels.size()) {
      throw ConfigError("transition table rows need one entry per reward label");
    }
    for (int next : row) {
      if (next < 0 || next >= m) throw ConfigError("transition table entry out of range");
    }
  }
  WealthSpace space;
  space.kind_ = WealthKind::Ordinal;
  space.classes_ = std::move(classes);
  space.labels_ = std::move(labels);
  space.table_ = std::move(table);
  space.w0_ = static_cast<Wealth>(initial_class);
  return space;
}

double WealthSpace::step_weight(int t) const {
  return kind_ == WealthKind::Discounted ? std::pow(gamma_, t) : 1.0;
}

Wealth WealthSpace::accumulate(Wealth w, Reward r, int t) const {
  switch (kind_) {
    case WealthKind::Additive:
      return w + r;
    case WealthKind::Discounted:
      return w + step_weight(t) * r;
    case WealthKind::Ordinal: {
      const double label = std::round(r);
      if (label != r || label < 0 || label >= static_cast<double>(labels_.size())) {
        throw ConfigError("ordinal reward " + std::to_string(r) + " is not a valid label index");
      }
      return class_wealth(table_[class_index(w)][static_cast<std::size_t>(label)]);
    }
  }
  return w;
}

std::strong_ordering WealthSpace::compare(Wealth a, Wealth b) const {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double WealthSpace::distance(Wealth a, Wealth b) const { return std::abs(a - b); }

MidElements WealthSpace::mid(Wealth lo, Wealth hi) const {
  if (lo > hi) throw ArgumentError("mid requires lo <= hi");
  if (kind_ == WealthKind::Ordinal) {
    const int i = class_index(lo);
    const int j = class_index(hi);
    return {class_wealth((i + j) / 2), class_wealth((i + j + 1) / 2)};
  }
  const Wealth m = lo + (hi - lo) / 2.0;
  return {m, m};
}

Wealth WealthSpace::prec(Wealth w) const {
  if (kind_ != WealthKind::Ordinal) {
    throw ArgumentError("prec is only defined on ordinal wealth spaces");
  }
  const int i = class_index(w);
  return class_wealth(i > 0 ? i - 1 : 0);
}

int WealthSpace::class_index(Wealth w) const {
  const double idx = std::round(w);
  if (idx != w || idx < 0 || idx >= static_cast<double>(classes_.size())) {
    throw ArgumentError("wealth " + std::to_string(w) + " is not a class of this space");
  }
  return static_cast<int>(idx);
}

int WealthSpace::class_of(const std::string& name) const {
  const auto it = std::find(classes_.begin(), classes_.end(), name);
  if (it == classes_.end()) throw ConfigError("unknown wealth class '" + name + "'");
  return static_cast<int>(it - classes_.begin());
}

int WealthSpace::label_of(const std::string& name) const {
  const auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) throw ConfigError("unknown reward label '" + name + "'");
  return static_cast<int>(it - labels_.begin());
}

}  // namespace qmdp
