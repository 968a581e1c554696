#pragma once

// Time integration of the master equation and the observables recorded
// along a trajectory.

#include <optional>
#include <vector>

#include "trapmode/lindblad.hpp"

namespace trapmode {

enum class StepMode { fixed, adaptive };

/// dense: matrix products on the full density matrix.
/// banded: each m - n band stepped with its tridiagonal operator.
enum class Backend { dense, banded };

struct IntegratorConfig {
  double t_final = 1.0;
  double dt = 0.0;  // 0 selects 0.05 / spectral_scale
  StepMode mode = StepMode::fixed;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int record_every = 1;
  Backend backend = Backend::dense;
  /// Extra times at which the step is shortened to land exactly and a record
  /// carrying p(n) is emitted.
  std::vector<double> checkpoints;

  void validate() const;
  double resolved_dt(const GeneratorSpec& g) const;
};

struct ObservableRecord {
  double t = 0.0;
  double mean_n = 0.0;
  double var_n = 0.0;
  double coherence_abs = 0.0;
  double coherence_arg = 0.0;
  double purity = 0.0;
  double entropy = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  std::optional<RVector> p_n;
};

struct Trajectory {
  IntegratorConfig config;
  double dt = 0.0;  // resolved initial step
  long steps = 0;
  std::vector<ObservableRecord> records;
  DensityMatrix final_state;
};

/// Tolerances enforced during a run.
inline constexpr double kTraceDriftTol = 1e-9;
inline constexpr double kPositivityTol = -1e-8;
/// Largest dt * spectral_scale accepted in fixed mode (RK4 stability).
inline constexpr double kStabilityReach = 2.5;

Trajectory evolve(const GeneratorSpec& g, const DensityMatrix& rho0, const IntegratorConfig& cfg);

/// Observables of a state; the returned record has t = 0.
ObservableRecord observables(const CMatrix& rho);
inline ObservableRecord observables(const DensityMatrix& rho) { return observables(rho.matrix()); }

/// P(theta_j), theta_j = 2 pi j / n_theta, of the number-phase distribution
/// (1/2pi) sum_{m,n} e^{i (m - n) theta} rho(m, n).
std::vector<double> phase_distribution(const CMatrix& rho, int n_theta);
inline std::vector<double> phase_distribution(const DensityMatrix& rho, int n_theta) {
  return phase_distribution(rho.matrix(), n_theta);
}

/// 1 - |first circular moment| of a distribution sampled on the uniform grid.
double circular_variance(const std::vector<double>& density);

/// -d ln|tr(a rho)| / dt by least squares over [0, window].
double coherence_decay_rate(const GeneratorSpec& g, const DensityMatrix& rho0, double window,
                            int samples = 200);

}  // namespace trapmode
