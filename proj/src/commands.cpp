#include "trapmode/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <random>
#include <sstream>

#include "trapmode/version.hpp"
#include "trapmode/well.hpp"

namespace trapmode {

using nlohmann::json;

namespace {

// Output files are staged in memory and only written once the command has
// finished; each lands via a temporary file and a rename.
class StagedOutputs {
 public:
  void add(std::string path, std::string content) {
    files_.emplace_back(std::move(path), std::move(content));
  }

  void commit() {
    std::vector<std::string> written;
    try {
      for (const auto& [path, content] : files_) {
        const std::string tmp = path + ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          if (!out) throw InvalidArgument("cannot write " + tmp);
          out << content;
          out.flush();
          if (!out) throw InvalidArgument("failed writing " + tmp);
        }
        std::filesystem::rename(tmp, path);
        written.push_back(path);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& [path, content] : files_) std::filesystem::remove(path + ".tmp", ec);
      for (const auto& path : written) std::filesystem::remove(path, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ".csv")).string();
}

std::string format_time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

json regime_json(const RegimeReport& r) {
  json flags = json::array();
  for (const auto& f : r.flags)
    flags.push_back({{"name", f.name}, {"level", to_string(f.level)}, {"value", f.value}});
  return {{"beta_Eb", r.beta_Eb}, {"fugacity", r.fugacity}, {"flags", flags}};
}

json balance_json(const std::vector<BalanceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"n", r.n},
                   {"rate_up", r.rate_up},
                   {"rate_down", r.rate_down},
                   {"ratio", r.ratio},
                   {"predicted", r.predicted},
                   {"rel_error", r.rel_error}});
  return out;
}

json base_summary(const RunConfig& cfg, const GeneratorSpec& g) {
  json s;
  s["version"] = kVersion;
  s["config"] = cfg.to_json();
  const ReservoirDerived res = derive_reservoir(cfg.physical);
  s["E_b"] = g.spec().E_b;
  s["E_r"] = g.spec().E_r;
  s["gamma"] = g.gamma();
  s["gamma_reservoir"] = res.gamma;
  s["fugacity"] = res.fugacity;
  s["density"] = res.density;
  s["c_feed"] = g.c_feed();
  s["c_deph"] = g.c_deph();
  s["regime"] = regime_json(validate_regime(cfg.physical, g.spec().E_b));
  return s;
}

json steady_json(const GeneratorSpec& g) {
  try {
    const SteadyState ss = steady_state(g);
    return {{"mean_n", ss.mean_n},
            {"mode", ss.mode},
            {"gl_argmin", gl_argmin(g.spec(), g.mu(), g.n_max())},
            {"residual", ss.residual}};
  } catch (const Error& e) {
    return {{"mean_n", nullptr}, {"mode", nullptr}, {"error", e.what()}};
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CMatrix audit_state(int dim) {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  CMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

struct Audit {
  std::string name;
  bool pass;
  double value;
  double limit;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BoundModeSpec make_bound_mode(const RunConfig& cfg) { return bound_mode_spec(cfg.physical); }

GeneratorSpec make_generator(const RunConfig& cfg) {
  const BoundModeSpec spec = make_bound_mode(cfg);
  const double gamma =
      cfg.gamma_override ? *cfg.gamma_override : derive_reservoir(cfg.physical).gamma;
  return GeneratorSpec::build(spec, cfg.physical.beta, cfg.physical.mu, gamma,
                              cfg.physical.alpha1, cfg.physical.alpha2, cfg.n_max);
}

DensityMatrix make_initial_state(const RunConfig& cfg) {
  const InitialState& s = cfg.initial_state;
  switch (s.kind) {
    case InitialState::Kind::vacuum: return state_vacuum(cfg.n_max);
    case InitialState::Kind::fock: return state_fock(s.n, cfg.n_max);
    case InitialState::Kind::coherent: return state_coherent(s.alpha, cfg.n_max);
    case InitialState::Kind::grand_canonical:
      return state_grand_canonical(make_bound_mode(cfg), cfg.physical.beta, cfg.physical.mu,
                                   cfg.n_max);
  }
  return state_vacuum(cfg.n_max);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const GeneratorSpec g = make_generator(cfg);
  const DensityMatrix rho0 = make_initial_state(cfg);
  IntegratorConfig icfg = cfg.integrator;
  icfg.checkpoints = cfg.outputs.pn_snapshots;
  const Trajectory traj = evolve(g, rho0, icfg);

  StagedOutputs out;
  std::ostringstream csv;
  csv << "time,mean_n,var_n,coherence_abs,coherence_arg,purity,entropy,trace_error\n";
  for (const auto& r : traj.records)
    csv << format_double(r.t) << ',' << format_double(r.mean_n) << ',' << format_double(r.var_n)
        << ',' << format_double(r.coherence_abs) << ',' << format_double(r.coherence_arg) << ','
        << format_double(r.purity) << ',' << format_double(r.entropy) << ','
        << format_double(r.trace_error) << '\n';
  out.add(cfg.outputs.timeseries_path, csv.str());

  for (double t_snap : cfg.outputs.pn_snapshots) {
    RVector p;
    if (t_snap == 0.0) {
      p = rho0.populations();
    } else {
      for (const auto& r : traj.records)
        if (r.p_n && std::abs(r.t - t_snap) <= 1e-12 * std::max(1.0, t_snap)) p = *r.p_n;
    }
    if (p.size() == 0) throw NonConvergent("missing p(n) snapshot at t = " + format_double(t_snap));
    std::ostringstream pn;
    pn << "n,p\n";
    for (int n = 0; n < p.size(); ++n) pn << n << ',' << format_double(p(n)) << '\n';
    out.add(with_suffix(cfg.outputs.timeseries_path, "_pn_t" + format_time_tag(t_snap)), pn.str());
  }

  if (cfg.outputs.phase_grid) {
    const int n_theta = *cfg.outputs.phase_grid;
    const std::vector<double> phase = phase_distribution(traj.final_state, n_theta);
    std::ostringstream ph;
    ph << "theta,P\n";
    for (int k = 0; k < n_theta; ++k)
      ph << format_double(2.0 * std::numbers::pi * k / n_theta) << ',' << format_double(phase[k])
         << '\n';
    out.add(with_suffix(cfg.outputs.timeseries_path, "_phase"), ph.str());
  }

  json summary = base_summary(cfg, g);
  summary["steady"] = steady_json(g);
  const ObservableRecord& last = traj.records.back();
  summary["final"] = {{"t", last.t},
                      {"mean_n", last.mean_n},
                      {"var_n", last.var_n},
                      {"coherence_abs", last.coherence_abs},
                      {"purity", last.purity},
                      {"entropy", last.entropy},
                      {"trace_error", last.trace_error},
                      {"min_eigenvalue", last.min_eigenvalue}};
  summary["integrator_dt"] = traj.dt;
  summary["steps"] = traj.steps;
  summary["records"] = traj.records.size();
  out.add(cfg.outputs.summary_path, dump(summary));
  out.commit();
  log << "simulate: " << traj.steps << " steps, " << traj.records.size()
      << " records, final mean_n = " << format_double(last.mean_n) << '\n';
  return kExitOk;
}

int cmd_steady(const RunConfig& cfg, std::ostream& log) {
  const GeneratorSpec g = make_generator(cfg);
  const SteadyState ss = steady_state(g);
  StagedOutputs out;
  std::ostringstream pn;
  pn << "n,p\n";
  for (int n = 0; n < ss.p.size(); ++n) pn << n << ',' << format_double(ss.p(n)) << '\n';
  out.add(cfg.outputs.steady_path, pn.str());

  json summary = base_summary(cfg, g);
  summary["steady"] = {{"mean_n", ss.mean_n},
                       {"mode", ss.mode},
                       {"gl_argmin", gl_argmin(g.spec(), g.mu(), g.n_max())},
                       {"residual", ss.residual}};
  summary["detailed_balance"] = balance_json(detailed_balance_report(g));
  out.add(cfg.outputs.summary_path, dump(summary));
  out.commit();
  log << "steady: mean_n = " << format_double(ss.mean_n) << ", mode = " << ss.mode << '\n';
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const GeneratorSpec g = make_generator(cfg);
  const RegimeReport regime = validate_regime(cfg.physical, g.spec().E_b);
  const double scale = std::max(1.0, g.spectral_scale());

  std::vector<Audit> audits;
  double worst_balance = 0.0;
  for (const auto& row : detailed_balance_report(g)) worst_balance = std::max(worst_balance, row.rel_error);
  audits.push_back({"detailed_balance", worst_balance <= 1e-13, worst_balance, 1e-13});

  const CMatrix rho = audit_state(g.dim());
  const CMatrix drho = apply_generator(g, rho);
  const double trace = std::abs(drho.trace());
  audits.push_back({"trace_preservation", trace <= 1e-12 * scale, trace, 1e-12 * scale});
  const double herm = hermiticity_error(drho);
  audits.push_back({"hermiticity_preservation", herm <= 1e-12 * scale, herm, 1e-12 * scale});
  const double band_diff = (apply_banded(band_decompose(g), rho) - drho).cwiseAbs().maxCoeff();
  audits.push_back({"banded_matches_dense", band_diff <= 1e-13 * scale, band_diff, 1e-13 * scale});
  try {
    const SteadyState ss = steady_state(g);
    audits.push_back({"stationarity", true, ss.residual, 1e-8 * scale});
  } catch (const Error&) {
    audits.push_back({"stationarity", false, std::numeric_limits<double>::quiet_NaN(), 1e-8 * scale});
  }

  bool failed = regime.any_fail();
  json report;
  report["version"] = kVersion;
  report["regime"] = regime_json(regime);
  json audit_json = json::array();
  for (const auto& a : audits) {
    failed = failed || !a.pass;
    audit_json.push_back({{"name", a.name},
                          {"level", a.pass ? "pass" : "fail"},
                          {"value", std::isfinite(a.value) ? json(a.value) : json(nullptr)},
                          {"limit", a.limit}});
  }
  report["audits"] = audit_json;
  report["result"] = failed ? "fail" : "pass";
  out << report.dump(2) << '\n';
  return failed ? kExitCheckFailed : kExitOk;
}

int cmd_scan(const RunConfig& cfg, const std::string& key, const std::vector<double>& values,
             std::ostream& log) {
  if (key.rfind("physical.", 0) != 0)
    throw ValidationError(key, "scan key must name a physical parameter");
  if (values.empty()) throw ValidationError("values", "scan needs at least one value");

  struct Row {
    double value, mean_n, E_b, E_r, c_feed;
    int mode, argmin;
  };
  std::vector<RunConfig> points;
  for (double v : values) {
    json doc = cfg.to_json();
    apply_override(doc, key + "=" + format_double(v));
    points.push_back(parse_config(doc));
  }
  std::vector<std::future<Row>> futures;
  for (std::size_t i = 0; i < points.size(); ++i)
    futures.push_back(std::async(std::launch::async, [&, i] {
      const GeneratorSpec g = make_generator(points[i]);
      const SteadyState ss = steady_state(g);
      return Row{values[i], ss.mean_n, g.spec().E_b, g.spec().E_r, g.c_feed(), ss.mode,
                 gl_argmin(g.spec(), g.mu(), g.n_max())};
    }));
  std::ostringstream csv;
  csv << "value,mean_n,mode,gl_argmin,E_b,E_r,c_feed\n";
  for (auto& f : futures) {
    const Row r = f.get();
    csv << format_double(r.value) << ',' << format_double(r.mean_n) << ',' << r.mode << ','
        << r.argmin << ',' << format_double(r.E_b) << ',' << format_double(r.E_r) << ','
        << format_double(r.c_feed) << '\n';
  }
  StagedOutputs out;
  out.add(cfg.outputs.scan_path, csv.str());
  out.commit();
  log << "scan: " << values.size() << " points over " << key << '\n';
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  return kExitRuntime;
}

}  // namespace trapmode
