#include "run_config.hpp"

#include <fstream>
#include <numbers>
#include <set>

#include "gibbs/hamiltonian.hpp"
#include "gibbs/linalg.hpp"

namespace gibbs::cli {

namespace {

const std::set<std::string> kCommands{"expand", "corr", "sqw", "cv", "validate"};

const std::set<std::string> kKeys{"command", "model",      "n",          "cluster_size", "cutoff",
                                  "beta",    "beta_min",   "beta_max",   "beta_points",  "orders",
                                  "t_max",   "grid_steps", "q_values",   "omega_points", "shots",
                                  "seed",    "out",        "perturb_cumulant"};

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type: " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<double> RunConfig::beta_grid() const {
  std::vector<double> grid;
  for (int k = 0; k < beta_points; ++k) {
    grid.push_back(beta_points == 1 ? beta_min : beta_min + (beta_max - beta_min) * k / (beta_points - 1));
  }
  return grid;
}

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.q_values = {0.0, std::numbers::pi / 2.0, std::numbers::pi, 1.5 * std::numbers::pi};
  if (command == "cv") {
    c.n = 8;
    c.cluster_size = 4;
  }
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},     {"model", c.model},
          {"n", c.n},                 {"cluster_size", c.cluster_size},
          {"cutoff", c.cutoff},       {"beta", c.beta},
          {"beta_min", c.beta_min},   {"beta_max", c.beta_max},
          {"beta_points", c.beta_points}, {"orders", c.orders},
          {"t_max", c.t_max},         {"grid_steps", c.grid_steps},
          {"q_values", c.q_values},   {"omega_points", c.omega_points},
          {"shots", c.shots},         {"seed", c.seed},
          {"out", c.out},             {"perturb_cumulant", c.perturb_cumulant}};
}

RunConfig from_json(const nlohmann::json& j, RunConfig c) {
  require(j.is_object(), "config must be a JSON object");
  for (const auto& item : j.items()) {
    require(kKeys.contains(item.key()), "unknown config field '" + item.key() + "'");
  }
  read(j, "command", c.command);
  read(j, "model", c.model);
  read(j, "n", c.n);
  read(j, "cluster_size", c.cluster_size);
  read(j, "cutoff", c.cutoff);
  read(j, "beta", c.beta);
  read(j, "beta_min", c.beta_min);
  read(j, "beta_max", c.beta_max);
  read(j, "beta_points", c.beta_points);
  read(j, "orders", c.orders);
  read(j, "t_max", c.t_max);
  read(j, "grid_steps", c.grid_steps);
  read(j, "q_values", c.q_values);
  read(j, "omega_points", c.omega_points);
  read(j, "shots", c.shots);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  read(j, "perturb_cumulant", c.perturb_cumulant);
  return c;
}

RunConfig from_json(const nlohmann::json& j) {
  const std::string command = j.is_object() && j.contains("command") && j["command"].is_string()
                                  ? j["command"].get<std::string>()
                                  : "expand";
  return from_json(j, defaults_for(command));
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("command") && j["command"] != command) {
    throw ConfigError("config file '" + path + "' is for command '" + j["command"].dump() +
                      "', not '" + command + "'");
  }
  RunConfig c = from_json(j, defaults_for(command));
  c.command = command;
  return c;
}

void validate(const RunConfig& c) {
  require(kCommands.contains(c.command), "unknown command '" + c.command + "'");
  Model model = Model::XY;
  try {
    model = parse_model(c.model);
  } catch (const std::exception&) {
    throw ConfigError("--model must be 'xy' or 'heisenberg' (got '" + c.model + "')");
  }
  require(model != Model::Custom, "--model must be a built-in chain");
  require(c.n >= 2 && c.n % 2 == 0, "--n must be an even number >= 2 (got " + std::to_string(c.n) + ")");
  require(c.n <= kDefaultDenseCap,
          "--n " + std::to_string(c.n) + " exceeds the dense cap of " + std::to_string(kDefaultDenseCap));
  require(c.cluster_size * 2 == c.n, "--cluster-size must equal n/2 = " + std::to_string(c.n / 2) + " (got " +
                                         std::to_string(c.cluster_size) + ")");
  require(c.cutoff >= 1 && c.cutoff <= c.n,
          "--cutoff must lie in [1, " + std::to_string(c.n) + "] (got " + std::to_string(c.cutoff) + ")");
  require(c.beta >= 0.0, "--beta must be non-negative");
  require(c.shots > 0, "--shots must be positive");
  require(!c.out.empty(), "--out must name a directory");

  if (c.command == "corr" || c.command == "sqw") {
    require(model == Model::XY, "corr and sqw need --model xy (Givens time evolution)");
    require(c.t_max > 0.0, "--t-max must be positive");
    require(c.grid_steps >= 2, "--grid-steps must be at least 2");
    require(c.omega_points >= 2, "omega_points must be at least 2");
    require(!c.q_values.empty(), "q_values must not be empty");
  }
  if (c.command == "cv") {
    require(c.beta_points >= 1, "beta_points must be at least 1");
    require(c.beta_min > 0.0 && c.beta_max >= c.beta_min,
            "the beta grid needs 0 < beta_min <= beta_max (C_v uses 1/T^2)");
  }
  if (c.command != "expand" && c.command != "validate") {
    require(!c.orders.empty(), "--orders must not be empty");
    for (const auto& label : c.orders) {
      if (label == "exact" || label == "sampled") continue;
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(label, &used);
        require(used == label.size(), "");
      } catch (const std::exception&) {
        throw ConfigError("order label '" + label + "' must be exact, sampled or an integer order");
      }
      require(k >= 1 && k <= c.n, "order " + label + " must lie in [1, " + std::to_string(c.n) + "]");
    }
  }
}

}  // namespace gibbs::cli
