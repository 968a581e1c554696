#include "trapmode/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "trapmode/fock.hpp"
#include "trapmode/well.hpp"

namespace trapmode {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ParseError(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw ParseError(join(prefix, key), "unknown key");
  }
}

double get_number(const json& obj, const std::string& prefix, const std::string& key,
                  std::optional<double> fallback) {
  const std::string path = join(prefix, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(path, "required key is missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& prefix, const std::string& key,
            std::optional<int> fallback) {
  const std::string path = join(prefix, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(path, "required key is missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& prefix, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(join(prefix, key), "expected a string");
  return v.get<std::string>();
}

void check(bool ok, const std::string& path, const std::string& rule) {
  if (!ok) throw ValidationError(path, rule);
}

void check_writable(const std::string& path, const std::string& key) {
  const auto parent = std::filesystem::absolute(path).parent_path();
  std::error_code ec;
  check(std::filesystem::is_directory(parent, ec), key,
        "directory " + parent.string() + " does not exist");
}

PhysicalParams parse_physical(const json& obj, std::optional<double>& gamma_override) {
  const std::string p = "physical";
  reject_unknown(obj, p,
                 {"beta", "mu", "a_lambda", "alpha1", "alpha2", "well_strength_sq", "well_radius",
                  "gamma_override"});
  const PhysicalParams d;
  PhysicalParams out;
  out.beta = get_number(obj, p, "beta", std::nullopt);
  out.mu = get_number(obj, p, "mu", std::nullopt);
  out.a_lambda = get_number(obj, p, "a_lambda", d.a_lambda);
  out.alpha1 = get_number(obj, p, "alpha1", d.alpha1);
  out.alpha2 = get_number(obj, p, "alpha2", d.alpha2);
  out.well_strength_sq = get_number(obj, p, "well_strength_sq", d.well_strength_sq);
  out.well_radius = get_number(obj, p, "well_radius", d.well_radius);
  if (obj.contains("gamma_override"))
    gamma_override = get_number(obj, p, "gamma_override", std::nullopt);

  check(std::isfinite(out.beta) && out.beta > 0.0, "physical.beta", "must be > 0");
  check(std::isfinite(out.mu), "physical.mu", "must be finite");
  check(std::isfinite(out.a_lambda) && out.a_lambda >= 0.0, "physical.a_lambda", "must be >= 0");
  check(std::isfinite(out.alpha1) && out.alpha1 >= 0.0, "physical.alpha1", "must be >= 0");
  check(std::isfinite(out.alpha2) && out.alpha2 >= 0.0, "physical.alpha2", "must be >= 0");
  check(std::isfinite(out.well_strength_sq) && out.well_strength_sq > 0.0,
        "physical.well_strength_sq", "must be > 0");
  check(std::isfinite(out.well_radius) && out.well_radius > 0.0, "physical.well_radius",
        "must be > 0");
  if (gamma_override)
    check(std::isfinite(*gamma_override) && *gamma_override >= 0.0, "physical.gamma_override",
          "must be >= 0");
  const int bound = count_s_bound_states(WellSpec::from_params(out));
  check(bound == 1, "physical.well_strength_sq",
        "well must hold exactly one s-wave bound state (has " + std::to_string(bound) + ")");
  return out;
}

InitialState parse_initial(const json& obj, int n_max) {
  const std::string p = "initial_state";
  reject_unknown(obj, p, {"kind", "n", "re", "im"});
  InitialState s;
  const std::string kind = get_string(obj, p, "kind", "vacuum");
  if (kind == "vacuum") {
    s.kind = InitialState::Kind::vacuum;
  } else if (kind == "fock") {
    s.kind = InitialState::Kind::fock;
    s.n = get_int(obj, p, "n", std::nullopt);
    check(s.n >= 0 && s.n <= n_max, "initial_state.n", "must lie in [0, n_max]");
  } else if (kind == "coherent") {
    s.kind = InitialState::Kind::coherent;
    s.alpha = Complex(get_number(obj, p, "re", 0.0), get_number(obj, p, "im", 0.0));
    check(std::norm(s.alpha) <= n_max / 4.0, "initial_state",
          "coherent amplitude |alpha|^2 must not exceed n_max/4");
  } else if (kind == "grand_canonical") {
    s.kind = InitialState::Kind::grand_canonical;
  } else {
    throw ValidationError("initial_state.kind", "unknown kind '" + kind + "'");
  }
  if (s.kind != InitialState::Kind::fock && obj.contains("n"))
    throw ValidationError("initial_state.n", "only valid for kind 'fock'");
  if (s.kind != InitialState::Kind::coherent && (obj.contains("re") || obj.contains("im")))
    throw ValidationError("initial_state.re", "only valid for kind 'coherent'");
  return s;
}

IntegratorConfig parse_integrator(const json& obj) {
  const std::string p = "integrator";
  reject_unknown(obj, p,
                 {"t_final", "dt", "mode", "rel_tol", "abs_tol", "record_every", "backend"});
  const IntegratorConfig d;
  IntegratorConfig c;
  c.t_final = get_number(obj, p, "t_final", d.t_final);
  c.dt = get_number(obj, p, "dt", d.dt);
  c.rel_tol = get_number(obj, p, "rel_tol", d.rel_tol);
  c.abs_tol = get_number(obj, p, "abs_tol", d.abs_tol);
  c.record_every = get_int(obj, p, "record_every", d.record_every);
  const std::string mode = get_string(obj, p, "mode", "fixed");
  if (mode == "fixed") c.mode = StepMode::fixed;
  else if (mode == "adaptive") c.mode = StepMode::adaptive;
  else throw ValidationError("integrator.mode", "must be 'fixed' or 'adaptive'");
  const std::string backend = get_string(obj, p, "backend", "dense");
  if (backend == "dense") c.backend = Backend::dense;
  else if (backend == "banded") c.backend = Backend::banded;
  else throw ValidationError("integrator.backend", "must be 'dense' or 'banded'");

  check(std::isfinite(c.t_final) && c.t_final > 0.0, "integrator.t_final", "must be > 0");
  check(std::isfinite(c.dt) && c.dt >= 0.0, "integrator.dt", "must be > 0 (0 selects auto)");
  check(c.dt <= c.t_final, "integrator.dt", "must not exceed t_final");
  check(c.rel_tol > 0.0, "integrator.rel_tol", "must be > 0");
  check(c.abs_tol > 0.0, "integrator.abs_tol", "must be > 0");
  check(c.record_every >= 1, "integrator.record_every", "must be >= 1");
  return c;
}

OutputConfig parse_outputs(const json& obj, double t_final) {
  const std::string p = "outputs";
  reject_unknown(obj, p,
                 {"timeseries_path", "summary_path", "steady_path", "scan_path", "pn_snapshots",
                  "phase_grid"});
  OutputConfig o;
  o.timeseries_path = get_string(obj, p, "timeseries_path", o.timeseries_path);
  o.summary_path = get_string(obj, p, "summary_path", o.summary_path);
  o.steady_path = get_string(obj, p, "steady_path", o.steady_path);
  o.scan_path = get_string(obj, p, "scan_path", o.scan_path);
  if (obj.contains("pn_snapshots")) {
    const json& arr = obj.at("pn_snapshots");
    if (!arr.is_array()) throw ParseError("outputs.pn_snapshots", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string key = "outputs.pn_snapshots[" + std::to_string(i) + "]";
      if (!arr[i].is_number()) throw ParseError(key, "expected a number");
      const double t = arr[i].get<double>();
      check(t >= 0.0 && t <= t_final, key, "snapshot time must lie in [0, t_final]");
      o.pn_snapshots.push_back(t);
    }
  }
  if (obj.contains("phase_grid") && !obj.at("phase_grid").is_null()) {
    o.phase_grid = get_int(obj, p, "phase_grid", std::nullopt);
    check(*o.phase_grid >= 4, "outputs.phase_grid", "must be >= 4");
  }
  check_writable(o.timeseries_path, "outputs.timeseries_path");
  check_writable(o.summary_path, "outputs.summary_path");
  check_writable(o.steady_path, "outputs.steady_path");
  check_writable(o.scan_path, "outputs.scan_path");
  return o;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["physical"] = {{"beta", physical.beta},
                   {"mu", physical.mu},
                   {"a_lambda", physical.a_lambda},
                   {"alpha1", physical.alpha1},
                   {"alpha2", physical.alpha2},
                   {"well_strength_sq", physical.well_strength_sq},
                   {"well_radius", physical.well_radius}};
  if (gamma_override) j["physical"]["gamma_override"] = *gamma_override;
  j["n_max"] = n_max;
  json init;
  switch (initial_state.kind) {
    case InitialState::Kind::vacuum: init["kind"] = "vacuum"; break;
    case InitialState::Kind::fock:
      init["kind"] = "fock";
      init["n"] = initial_state.n;
      break;
    case InitialState::Kind::coherent:
      init["kind"] = "coherent";
      init["re"] = initial_state.alpha.real();
      init["im"] = initial_state.alpha.imag();
      break;
    case InitialState::Kind::grand_canonical: init["kind"] = "grand_canonical"; break;
  }
  j["initial_state"] = init;
  j["integrator"] = {{"t_final", integrator.t_final},
                     {"dt", integrator.dt},
                     {"mode", integrator.mode == StepMode::fixed ? "fixed" : "adaptive"},
                     {"rel_tol", integrator.rel_tol},
                     {"abs_tol", integrator.abs_tol},
                     {"record_every", integrator.record_every},
                     {"backend", integrator.backend == Backend::dense ? "dense" : "banded"}};
  j["outputs"] = {{"timeseries_path", outputs.timeseries_path},
                  {"summary_path", outputs.summary_path},
                  {"steady_path", outputs.steady_path},
                  {"scan_path", outputs.scan_path},
                  {"pn_snapshots", outputs.pn_snapshots},
                  {"phase_grid", outputs.phase_grid ? json(*outputs.phase_grid) : json(nullptr)}};
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ParseError(assignment, "override must have the form key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ParseError(path, "empty path component");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& child = (*node)[parts[i]];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ParseError(path, "'" + parts[i] + "' is not an object");
    node = &child;
  }
  (*node)[parts.back()] = std::move(value);
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"physical", "n_max", "initial_state", "integrator", "outputs"});
  RunConfig cfg;
  if (!doc.contains("physical")) throw ValidationError("physical", "required key is missing");
  cfg.physical = parse_physical(doc.at("physical"), cfg.gamma_override);
  cfg.n_max = get_int(doc, "", "n_max", std::nullopt);
  check(cfg.n_max >= 1, "n_max", "must be >= 1");
  cfg.initial_state = parse_initial(doc.value("initial_state", json::object()), cfg.n_max);
  cfg.integrator = parse_integrator(doc.value("integrator", json::object()));
  cfg.outputs = parse_outputs(doc.value("outputs", json::object()), cfg.integrator.t_final);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw ParseError(path, "malformed JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

}  // namespace trapmode
