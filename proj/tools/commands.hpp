#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmdp/generators.hpp"

namespace qmdp::cli {

struct GarnetArgs {
  GarnetConfig config;
  std::optional<int> branching;
  std::string out;
};

struct DataCenterArgs {
  DataCenterConfig config;
  std::string out;
};

struct SolveArgs {
  std::string problem;
  double tau = 0.5;
  double epsilon = 1e-3;
  std::string criterion = "lower";
  std::string horizon;
  std::string bounds;
  std::string out;
  std::string log;
  std::string dump_values;
  double eps_conv = 1e-6;
  int max_sweeps = 10000;
};

struct EvalArgs {
  std::string problem;
  std::string policy;
  bool standard = false;
  /// Fail with a resource error instead of falling back to Monte Carlo.
  bool exact_only = false;
  std::vector<double> taus{0.1, 0.5, 0.9};
  std::string csv;
  std::string summary;
  std::string horizon;
  std::size_t samples = 100000;
  std::size_t atom_cap = 10'000'000;
  std::uint64_t seed = 0;
};

struct BenchArgs {
  std::string family = "garnet";
  std::vector<int> states{50, 100, 250};
  int actions = 5;
  int servers = 10;
  std::vector<int> horizons{5, 10, 15};
  int horizon = 5;
  int reps = 10;
  std::string mode = "bi";
  double tau = 0.1;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleArgs {
  int instances = 100;
  std::uint64_t seed = 0;
};

/// Default seed: QMDP_SEED when set, else 0.
std::uint64_t default_seed();

int cmd_generate_garnet(GarnetArgs args);
int cmd_generate_datacenter(const DataCenterArgs& args);
int cmd_solve(const SolveArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_dist(const EvalArgs& args);
int cmd_bench(const BenchArgs& args);
int cmd_oracle_check(const OracleArgs& args);

}  // namespace qmdp::cli
