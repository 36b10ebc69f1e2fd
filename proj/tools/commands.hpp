#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace gibbs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;

int cmd_expand(const RunConfig& config, std::ostream& out);
int cmd_corr(const RunConfig& config, std::ostream& out);
int cmd_sqw(const RunConfig& config, std::ostream& out);
int cmd_cv(const RunConfig& config, std::ostream& out);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The invariant suite; `perturb_cumulant` adds 1e-3 to one eigenvalue of Delta_3.
std::vector<CheckResult> validation_checks(bool perturb_cumulant);
int cmd_validate(const RunConfig& config, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 12 significant digits.
std::string format_number(double x);

}  // namespace gibbs::cli
