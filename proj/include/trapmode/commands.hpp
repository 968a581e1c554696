#pragma once

// Batch commands behind the trapmode executable.  Each returns the process
// exit code; library errors propagate as exceptions.

#include <iosfwd>
#include <string>
#include <vector>

#include "trapmode/config.hpp"

namespace trapmode {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitRuntime = 4,
};

/// Generator for a run: well and reservoir from the physical block, gamma
/// replaced by gamma_override when present.
GeneratorSpec make_generator(const RunConfig& cfg);
BoundModeSpec make_bound_mode(const RunConfig& cfg);
DensityMatrix make_initial_state(const RunConfig& cfg);

/// Fixed-notation formatting shared by every CSV writer.
std::string format_double(double v);

int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_steady(const RunConfig& cfg, std::ostream& log);
int cmd_check(const RunConfig& cfg, std::ostream& out);
/// key is a dot path of a physical parameter ("physical.mu", "physical.beta").
int cmd_scan(const RunConfig& cfg, const std::string& key, const std::vector<double>& values,
             std::ostream& log);

/// Maps an exception to its exit code.
int exit_code_for(const std::exception& e);

}  // namespace trapmode
