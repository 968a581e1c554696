#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trapmode/commands.hpp"
#include "trapmode/version.hpp"

namespace {

class NullBuffer : public std::streambuf {
 protected:
  int overflow(int c) override { return c; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-system simulator for a single trapped Bose mode"};
  app.set_version_flag("--version", trapmode::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--override", overrides, "key.path=value applied to the config before parsing");
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.fallthrough();

  auto* simulate = app.add_subcommand("simulate", "evolve the master equation and write time series");
  auto* steady = app.add_subcommand("steady", "stationary distribution and detailed-balance table");
  auto* check = app.add_subcommand("check", "regime and generator audits; exit 1 on any failure");
  auto* scan = app.add_subcommand("scan", "stationary state over a list of parameter values");
  std::string scan_key = "physical.mu";
  std::vector<double> scan_values;
  scan->add_option("--key", scan_key, "physical parameter to vary");
  scan->add_option("--values", scan_values, "values to scan")->required()->delimiter(',');
  for (auto* sub : {simulate, steady, check, scan}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return trapmode::kExitParse;
  }

  NullBuffer null_buffer;
  std::ostream null_stream(&null_buffer);
  std::ostream& log = quiet ? null_stream : std::cerr;

  try {
    const trapmode::RunConfig cfg = trapmode::load_config(config_path, overrides);
    if (!quiet) log << cfg.to_json().dump(2) << '\n';
    if (*simulate) return trapmode::cmd_simulate(cfg, log);
    if (*steady) return trapmode::cmd_steady(cfg, log);
    if (*check) return trapmode::cmd_check(cfg, std::cout);
    if (*scan) return trapmode::cmd_scan(cfg, scan_key, scan_values, log);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return trapmode::exit_code_for(e);
  }
  return trapmode::kExitRuntime;
}
