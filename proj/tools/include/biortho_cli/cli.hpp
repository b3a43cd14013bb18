#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace biortho::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kSolverFailure = 2, kConfigError = 64 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"polys", "recurrence", "cd-check", "kernel",
                                              "curve", "eq",         "sample",   "validate"};
  return names;
}

struct RunConfig {
  std::string command;
  std::string theta = "2";
  std::string potential = "linear:1";
  /// "laguerre" for e^{-x}, or "potential" for x^alpha e^{-V}.
  std::string weight = "potential";
  double alpha = 0.0;
  /// Empty selects a per-command file name; "-" writes to stdout.
  std::string out;
  unsigned bits = 256;
  std::string moments = "automatic";
  int jmax = 10;
  /// Kernel and Christoffel-Darboux size, or particle count for `sample`.
  int n = 5;
  int grid = 400;
  int curve_nodes = 512;
  double c = 1.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double xmax = 5.0;
  int points = 100;
  double tol = 1e-12;
  int sweeps = 20000;
  int burn_in = -1;
  int thinning = 10;
  double proposal = 0.1;
  std::uint64_t seed = 7;

  /// Throws InvalidConfiguration.
  void validate() const;
  std::string default_output() const;
};

/// One line "# key=value ..." listing every field.
std::string config_echo(const RunConfig& cfg);

struct CheckResult {
  std::string check_name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

std::vector<CheckResult> validation_suite(const RunConfig& cfg);
void write_report_json(std::ostream& os, const std::vector<CheckResult>& checks);

/// Executes one command. Library errors propagate to the caller.
int run(const RunConfig& cfg);

/// Parses flags (and an optional JSON file given by --config, whose keys are
/// the long flag names; flags win), runs, and maps errors to exit codes.
int main_entry(int argc, char** argv);

}  // namespace biortho::cli
