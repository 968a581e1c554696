#pragma once

// Dimensionless model inputs and reservoir rate formulas.
//
// Unit system: the energy unit is hbar^2 lambda^2 / 2m, the length unit is
// 1/lambda and the time unit is 2m / (hbar lambda^2).  In these units
// hbar/m = 2 and a particle of wavenumber k has speed 2k and energy k^2.

#include <numbers>
#include <string>
#include <vector>

namespace trapmode {

struct PhysicalParams {
  double beta = 1.0;
  double mu = -1.0;
  double a_lambda = 0.01;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double well_strength_sq = 1.0;
  double well_radius = std::numbers::pi;

  // Throws InvalidArgument naming the first offending field.
  void validate() const;
};

struct ReservoirDerived {
  double fugacity = 0.0;  // e^{beta mu}
  double density = 0.0;   // e^{beta mu} (4 pi beta)^{-3/2}
  double gamma = 0.0;     // sigma * density * mean speed
};

/// Hard-sphere cross section 16 pi (a lambda)^2.
double cross_section(const PhysicalParams& p);

/// Mean Maxwell-Boltzmann speed sqrt(16 / (pi beta)).
double mean_thermal_speed(double beta);

ReservoirDerived derive_reservoir(const PhysicalParams& p);

/// Boltzmann scattering rate of a gas particle with wavenumber k,
/// gamma_k = 2 k sigma d.  Throws InvalidArgument for k < 0.
double boltzmann_rate_k(const PhysicalParams& p, double k);

enum class FlagLevel { pass, warn, fail };

std::string to_string(FlagLevel level);

struct RegimeFlag {
  std::string name;
  FlagLevel level;
  double value;
};

struct RegimeReport {
  double beta_Eb = 0.0;
  double fugacity = 0.0;
  std::vector<RegimeFlag> flags;

  bool any_fail() const;
  const RegimeFlag& flag(const std::string& name) const;
};

/// Checks the dilute, deeply-bound, weakly-interacting regime the master
/// equation assumes.  Warnings only; never blocks computation.
RegimeReport validate_regime(const PhysicalParams& p, double E_b);

}  // namespace trapmode
