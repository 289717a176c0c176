#pragma once

#include <cstdint>
#include <string>

#include "asdm/io.hpp"

namespace asdm {

/// Exit codes shared by the CLI and the suite runner.
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 2,
  kCertificateFailure = 3,
  kSolverFailure = 4,
};

/// One experiment: a command, its parameter map, a seed, and where to write
/// the JSON result (CSV side files derive from output_path).  Unknown
/// parameter keys are rejected.
struct ExperimentSpec {
  std::string command;
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::string output_path;
};

/// Execute one experiment: writes the JSON result document (always; schema v1
/// with the fully resolved config echoed), CSV data files where applicable,
/// prints a one-line summary to `log`, and returns the exit code.  Result
/// documents carry no timestamps; wall-clock metadata goes to a sidecar
/// `<output>.meta` file so identical spec+seed reruns are byte-identical.
int run(const ExperimentSpec& spec, std::ostream& log);

/// Run every spec of a suite config (JSON: {"specs": [...]}), write per-spec
/// results plus an aggregate summary (with the 6/64 and 1/8 headline ratios)
/// under out_dir, and return the max exit code.
int run_suite(const std::string& config_path, const std::string& out_dir,
              std::ostream& log, int threads = 0);

}  // namespace asdm
