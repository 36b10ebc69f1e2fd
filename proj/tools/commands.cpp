#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "gibbs/error.hpp"
#include "gibbs/exact_gibbs.hpp"
#include "gibbs/expansion.hpp"
#include "gibbs/observables.hpp"
#include "gibbs/sampler.hpp"

namespace gibbs::cli {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::filesystem::path output_path(const RunConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.out);
  return std::filesystem::path(c.out) / file;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

std::vector<double> times_of(const RunConfig& c) { return time_grid(c.t_max, c.grid_steps); }

CorrelationTensor tensor_for(const RunConfig& c, Model model, const std::string& label,
                             const std::vector<double>& times) {
  if (label == "exact") return correlation_matrix(build_chain(model, c.n), c.beta, times);
  if (label == "sampled") {
    return correlation_matrix(refined_expansion(model, c.n, c.cluster_size, c.cutoff, c.beta), times,
                              SamplerConfig{c.shots, c.seed});
  }
  return correlation_matrix(expansion_at_order(model, c.n, c.cluster_size, std::stoi(label), c.beta), times);
}

double sampled_specific_heat(const RunConfig& c, Model model, double beta) {
  const auto e = refined_expansion(model, c.n, c.cluster_size, c.cutoff, beta);
  const Matrix h = to_dense(build_chain(model, c.n));
  const auto first = estimate(e, h, c.shots, c.seed);
  const auto second = estimate(e, h * h, c.shots, c.seed);
  return beta * beta / c.n * (second.mean - first.mean * first.mean);
}

}  // namespace

int cmd_expand(const RunConfig& c, std::ostream& out) {
  const Model model = parse_model(c.model);
  const auto e = refined_expansion(model, c.n, c.cluster_size, c.cutoff, c.beta);
  const auto bound = bias_bound(e, 1.0);
  const double error =
      trace_norm(Matrix(gibbs_state(build_chain(model, c.n), c.beta).matrix() - assemble_dense(e).matrix()));

  auto doc = to_json(e);
  doc["bias_bound"] = {{"value", bound.value}, {"complete", bound.complete},
                       {"largest_included", bound.largest_included}, {"observable_norm", 1.0}};
  doc["trace_norm_error"] = error;
  const auto path = output_path(c, "expansion.json");
  open_output(path) << doc.dump(2) << "\n";

  out << "model " << c.model << " N " << c.n << " M " << c.cluster_size << " m_c " << c.cutoff << " beta "
      << format_number(c.beta) << "\n";
  out << "lambda " << format_number(e.lambda()) << "\n";
  for (std::size_t t = 0; t < e.terms().size(); ++t) {
    out << "term " << t << " " << describe(e.terms()[t]) << " weight " << format_number(e.terms()[t].weight_norm)
        << "\n";
  }
  out << "bias_bound " << format_number(bound.value) << (bound.complete ? "" : " (partial)")
      << " for unit-norm observables\n";
  out << "trace_norm_error " << format_number(error) << "\n";
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_corr(const RunConfig& c, std::ostream& out) {
  const Model model = parse_model(c.model);
  const auto times = times_of(c);
  for (const auto& label : c.orders) {
    const auto tensor = tensor_for(c, model, label, times);
    const auto path = output_path(c, "corr_" + tensor.label + ".csv");
    auto f = open_output(path);
    f << "i,j,t,re,im\n";
    for (int i = 0; i < tensor.n_sites; ++i) {
      for (int j = 0; j < tensor.n_sites; ++j) {
        for (std::size_t k = 0; k < times.size(); ++k) {
          const cplx v = tensor.at(i, j, k);
          f << i << ',' << j << ',' << format_number(times[k]) << ',' << format_number(v.real()) << ','
            << format_number(v.imag()) << '\n';
        }
      }
    }
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_sqw(const RunConfig& c, std::ostream& out) {
  const Model model = parse_model(c.model);
  const auto times = times_of(c);
  const auto omegas = omega_grid(times[1] - times[0], c.omega_points);
  for (const auto& label : c.orders) {
    const auto tensor = tensor_for(c, model, label, times);
    const auto path = output_path(c, "sqw_" + tensor.label + ".csv");
    auto f = open_output(path);
    f << "Q,omega,S\n";
    for (double q : c.q_values) {
      const auto s = structure_factor(tensor, q, omegas);
      for (std::size_t w = 0; w < omegas.size(); ++w) {
        f << format_number(q) << ',' << format_number(omegas[w]) << ',' << format_number(s.values[w]) << '\n';
      }
    }
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_cv(const RunConfig& c, std::ostream& out) {
  const Model model = parse_model(c.model);
  const auto path = output_path(c, "cv.csv");
  auto f = open_output(path);
  f << "beta,Cv,label\n";
  for (double beta : c.beta_grid()) {
    for (const auto& label : c.orders) {
      double cv = 0.0;
      std::string name = label;
      if (label == "exact") {
        cv = specific_heat(model, c.n, beta);
      } else if (label == "sampled") {
        cv = sampled_specific_heat(c, model, beta);
      } else {
        cv = specific_heat(expansion_at_order(model, c.n, c.cluster_size, std::stoi(label), beta));
        name = "order-" + label;
      }
      f << format_number(beta) << ',' << format_number(cv) << ',' << name << '\n';
    }
  }
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const auto checks = validation_checks(c.perturb_cumulant);
  int failed = 0;
  for (const auto& r : checks) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.pass) ++failed;
  }
  out << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitValidation;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster-cumulant Gibbs state expansions: build, sample and validate"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, model, out_dir;
  std::optional<int> n, cluster_size, cutoff, grid_steps;
  std::optional<double> beta, t_max;
  std::optional<std::uint64_t> shots, seed;
  std::optional<std::vector<std::string>> orders;
  bool perturb = false;

  const std::vector<std::string> names{"expand", "corr", "sqw", "cv", "validate"};
  const std::vector<std::string> help{
      "build an expansion and report lambda and the bias bound", "write ZZ correlation tensors as CSV",
      "write dynamical structure factor slices as CSV", "write specific heat curves as CSV",
      "run the invariant suite"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    auto* sub = app.add_subcommand(names[k], help[k]);
    sub->add_option("--config", config_path, "JSON config file; flags override its fields");
    sub->add_option("--model", model, "xy or heisenberg");
    sub->add_option("--n", n, "chain length N");
    sub->add_option("--cluster-size", cluster_size, "cluster size M (N = 2M)");
    sub->add_option("--cutoff", cutoff, "largest cumulant size m_c");
    sub->add_option("--beta", beta, "inverse temperature");
    sub->add_option("--shots", shots, "Monte Carlo shots");
    sub->add_option("--seed", seed, "base seed of the per-shot streams");
    sub->add_option("--grid-steps", grid_steps, "number of time points");
    sub->add_option("--t-max", t_max, "final time");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--orders", orders, "labels among exact, sampled and integer orders");
    if (names[k] == "validate") sub->add_flag("--perturb-cumulant", perturb, "negative control: perturb Delta_3");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  std::string command;
  for (const auto& name : names) {
    if (app.got_subcommand(name)) command = name;
  }

  RunConfig c;
  try {
    c = config_path ? load_config(*config_path, command) : defaults_for(command);
    if (model) c.model = *model;
    if (n) {
      c.n = *n;
      if (!cluster_size) c.cluster_size = *n / 2;
    }
    if (cluster_size) c.cluster_size = *cluster_size;
    if (cutoff) c.cutoff = *cutoff;
    if (beta) c.beta = *beta;
    if (shots) c.shots = *shots;
    if (seed) c.seed = *seed;
    if (grid_steps) c.grid_steps = *grid_steps;
    if (t_max) c.t_max = *t_max;
    if (out_dir) c.out = *out_dir;
    if (orders) c.orders = *orders;
    if (perturb) c.perturb_cumulant = true;
    validate(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (command == "expand") return cmd_expand(c, out);
    if (command == "corr") return cmd_corr(c, out);
    if (command == "sqw") return cmd_sqw(c, out);
    if (command == "cv") return cmd_cv(c, out);
    return cmd_validate(c, out);
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Unsupported& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace gibbs::cli
