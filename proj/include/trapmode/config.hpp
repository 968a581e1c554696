#pragma once

// Run configuration: a single strict JSON document.  Unknown keys are
// rejected, every violation names the offending dot path.

#include "json.hpp"
#include <optional>
#include <string>
#include <vector>

#include "trapmode/errors.hpp"
#include "trapmode/evolve.hpp"
#include "trapmode/params.hpp"

namespace trapmode {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& kind, std::string key, const std::string& what)
      : Error(kind + " at '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ParseError : public ConfigError {
 public:
  ParseError(std::string key, const std::string& what)
      : ConfigError("ParseError", std::move(key), what) {}
};

class ValidationError : public ConfigError {
 public:
  ValidationError(std::string key, const std::string& what)
      : ConfigError("ValidationError", std::move(key), what) {}
};

struct InitialState {
  enum class Kind { vacuum, fock, coherent, grand_canonical };
  Kind kind = Kind::vacuum;
  int n = 0;
  Complex alpha = 0.0;
};

struct OutputConfig {
  std::string timeseries_path = "timeseries.csv";
  std::string summary_path = "summary.json";
  std::string steady_path = "steady_pn.csv";
  std::string scan_path = "scan.csv";
  std::vector<double> pn_snapshots;
  std::optional<int> phase_grid;
};

struct RunConfig {
  PhysicalParams physical;
  /// Replaces the reservoir-derived gamma when set.
  std::optional<double> gamma_override;
  int n_max = 0;
  InitialState initial_state;
  IntegratorConfig integrator;
  OutputConfig outputs;

  /// The fully resolved configuration, defaults included.
  nlohmann::json to_json() const;
};

/// Sets the value at a dot path ("physical.mu=-0.8").  The value is parsed
/// as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

RunConfig parse_config(const nlohmann::json& doc);

/// Reads, applies overrides, parses and validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace trapmode
