#include "trapmode/params.hpp"

#include <cmath>
#include <numbers>

#include "trapmode/errors.hpp"

namespace trapmode {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw InvalidArgument(std::string(field) + " must be " + rule);
}

FlagLevel grade(double value, double pass_limit, double warn_limit, bool lower_is_better) {
  if (lower_is_better) {
    if (value <= pass_limit) return FlagLevel::pass;
    if (value <= warn_limit) return FlagLevel::warn;
    return FlagLevel::fail;
  }
  if (value >= pass_limit) return FlagLevel::pass;
  if (value >= warn_limit) return FlagLevel::warn;
  return FlagLevel::fail;
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(beta) && beta > 0.0, "beta", "finite and > 0");
  require(std::isfinite(mu), "mu", "finite");
  require(std::isfinite(a_lambda) && a_lambda >= 0.0, "a_lambda", "finite and >= 0");
  require(std::isfinite(alpha1) && alpha1 >= 0.0, "alpha1", "finite and >= 0");
  require(std::isfinite(alpha2) && alpha2 >= 0.0, "alpha2", "finite and >= 0");
  require(std::isfinite(well_strength_sq) && well_strength_sq > 0.0, "well_strength_sq",
          "finite and > 0");
  require(std::isfinite(well_radius) && well_radius > 0.0, "well_radius", "finite and > 0");
}

double cross_section(const PhysicalParams& p) {
  return 16.0 * std::numbers::pi * p.a_lambda * p.a_lambda;
}

double mean_thermal_speed(double beta) {
  return std::sqrt(16.0 / (std::numbers::pi * beta));
}

ReservoirDerived derive_reservoir(const PhysicalParams& p) {
  p.validate();
  ReservoirDerived r;
  r.fugacity = std::exp(p.beta * p.mu);
  r.density = r.fugacity * std::pow(4.0 * std::numbers::pi * p.beta, -1.5);
  r.gamma = cross_section(p) * r.density * mean_thermal_speed(p.beta);
  return r;
}

double boltzmann_rate_k(const PhysicalParams& p, double k) {
  if (!(k >= 0.0)) throw InvalidArgument("wavenumber k must be >= 0");
  const ReservoirDerived r = derive_reservoir(p);
  return 2.0 * k * cross_section(p) * r.density;
}

std::string to_string(FlagLevel level) {
  switch (level) {
    case FlagLevel::pass: return "pass";
    case FlagLevel::warn: return "warn";
    case FlagLevel::fail: return "fail";
  }
  return "fail";
}

bool RegimeReport::any_fail() const {
  for (const auto& f : flags)
    if (f.level == FlagLevel::fail) return true;
  return false;
}

const RegimeFlag& RegimeReport::flag(const std::string& name) const {
  for (const auto& f : flags)
    if (f.name == name) return f;
  throw InvalidArgument("no regime flag named " + name);
}

RegimeReport validate_regime(const PhysicalParams& p, double E_b) {
  if (!(E_b > 0.0)) throw InvalidArgument("E_b must be > 0");
  RegimeReport report;
  report.beta_Eb = p.beta * E_b;
  report.fugacity = std::exp(p.beta * p.mu);
  report.flags.push_back({"beta_Eb", grade(report.beta_Eb, 5.0, 2.0, false), report.beta_Eb});
  report.flags.push_back({"fugacity", grade(report.fugacity, 0.1, 0.5, true), report.fugacity});
  report.flags.push_back(
      {"weak_interaction", grade(p.a_lambda, 0.1, 0.3, true), p.a_lambda});
  return report;
}

}  // namespace trapmode
