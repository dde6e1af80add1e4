#pragma once

#include <string>
#include <vector>

#include "icx/scenario.hpp"

namespace icx {

struct AuditSpec {
  std::vector<int> agents;
  long n_outer = 20000;
  long min_matched = 200;
};

struct SweepSpec {
  std::vector<int> n_grid{100, 1000, 10000};
  std::vector<double> alpha_grid{0.3};
  std::vector<double> beta_grid{0.2};
  std::string graph_kind = "two-tier";
  double avg_degree = 4.0;
  long replications = 20;
};

/// Everything a CLI invocation needs, parsed from one JSON config file.
/// Unknown keys anywhere in the file are errors.
struct LoadedConfig {
  Scenario scenario;
  long replications = 100;
  uint64_t seed = 1;
  AuditSpec audit;
  SweepSpec sweep;
  bool has_sweep = false;
};

LoadedConfig load_config(const std::string& path);
/// Parses config text directly (the file loader plus tests go through this).
LoadedConfig parse_config_text(const std::string& text);

}  // namespace icx
