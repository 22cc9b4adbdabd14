#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qmdp/distribution.hpp"
#include "qmdp/functional_dp.hpp"
#include "qmdp/mdp.hpp"
#include "qmdp/policy.hpp"
#include "qmdp/quantile_solver.hpp"

namespace qmdp {

struct Problem {
  Mdp mdp;
  WealthSpace space;
};

/// Problem files: {"mdp": {...}, "wealth_space": {...}}. Throws ConfigError.
Problem problem_from_json(const std::string& text);
std::string problem_to_json(const Problem& problem);
Problem load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const Problem& problem);

/// JSON list of {t, s, intervals: [{from, inclusive_from, action}]}.
/// Stationary policies omit t; the first interval has "from": null.
std::string policy_to_json(const WealthMarkovPolicy& pi);
WealthMarkovPolicy policy_from_json(const std::string& text, int n_states);

/// CSV rows (wealth, probability, F, G).
std::string distribution_csv(const WealthDistribution& d);
/// CSV rows (iteration, w, p, accepted).
std::string search_log_csv(const SolveReport& report);
/// CSV rows (t, s, threshold, inclusive, value) for every computed slice.
std::string value_function_csv(const ValueFunction& vf);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qmdp
