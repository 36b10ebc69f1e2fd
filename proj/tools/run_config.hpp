#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gibbs::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a command needs. Command-specific defaults come from defaults_for.
struct RunConfig {
  std::string command = "expand";
  std::string model = "xy";
  int n = 4;
  int cluster_size = 2;
  int cutoff = 3;
  double beta = 0.8;
  double beta_min = 0.05;
  double beta_max = 2.0;
  int beta_points = 40;
  std::vector<std::string> orders{"exact", "1", "2", "3"};
  double t_max = 5.0;
  int grid_steps = 51;
  std::vector<double> q_values;
  int omega_points = 201;
  std::uint64_t shots = 4000;
  std::uint64_t seed = 0;
  std::string out = ".";
  bool perturb_cumulant = false;

  std::vector<double> beta_grid() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig defaults_for(const std::string& command);

nlohmann::json to_json(const RunConfig& config);

/// Overlays the keys present in `j` onto `base`; unknown keys are an error.
RunConfig from_json(const nlohmann::json& j, RunConfig base);
RunConfig from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path, const std::string& command);

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& config);

}  // namespace gibbs::cli
