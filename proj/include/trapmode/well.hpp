#pragma once

// Bound s-wave state of an attractive spherical square well,
//   (nabla^2 + k^2) u = -depth * theta(radius - r) u,
// and the self-repulsion energy of the condensate occupying it.

#include "trapmode/params.hpp"

namespace trapmode {

struct WellSpec {
  double depth = 1.0;
  double radius = std::numbers::pi;

  static WellSpec from_params(const PhysicalParams& p);
  double strength() const;  // sqrt(depth) * radius
  void validate() const;
};

struct BoundState {
  double kappa = 0.0;  // exterior decay constant
  double q = 0.0;      // interior wavenumber
  double E_b = 0.0;    // kappa^2
  double norm_A = 0.0; // u = A sin(q r) / r inside
  double norm_B = 0.0; // u = B exp(-kappa r) / r outside
};

struct BoundModeSpec {
  double E_b = 0.0;
  double E_r = 0.0;
};

/// Number of s-wave bound states: odd multiples of pi/2 strictly below the
/// well strength.
int count_s_bound_states(const WellSpec& w);

/// Residual of the matching condition, q cot(q R) + sqrt(depth - q^2).
double matching_residual(const WellSpec& w, double q);

BoundState solve_bound_state(const WellSpec& w, double tol = 1e-14);

double bound_wavefunction(const BoundState& b, const WellSpec& w, double r);

/// 4 pi * integral of u_B^4 over all space.  The interior is split into
/// `panels` Gauss-Legendre panels; the exterior is integrated analytically.
double quartic_overlap(const BoundState& b, const WellSpec& w, int panels = 64);

/// Total probability 4 pi * integral r^2 u_B^2 dr, by the same quadrature
/// used for the quartic overlap.
double norm_integral(const BoundState& b, const WellSpec& w, int panels = 64);

double repulsion_energy(const BoundState& b, const WellSpec& w, double a_lambda);

/// E_b and E_r for the well described by p.
BoundModeSpec bound_mode_spec(const PhysicalParams& p);

}  // namespace trapmode
