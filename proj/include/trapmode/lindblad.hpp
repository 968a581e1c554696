#pragma once

// The bound-mode master equation
//
//   d rho/dt = i [rho, H_B] - c_deph ({n^2, rho} - 2 n rho n)
//              - c_feed sum_{+-} ({Q^dag Q, rho} - 2 Q rho Q^dag)
//
// with c_feed = alpha1 gamma e^{beta mu} / (beta E_b) and c_deph = alpha2 gamma.
// Every term couples rho(m, n) only to rho(m +- 1, n +- 1) or itself, so each
// diagonal band m - n = s evolves independently under a tridiagonal operator.

#include <vector>

#include "trapmode/fock.hpp"
#include "trapmode/params.hpp"

namespace trapmode {

class GeneratorSpec {
 public:
  /// Rates from the reservoir: requires beta > 0, E_b > 0, gamma >= 0.
  static GeneratorSpec build(const BoundModeSpec& spec, double beta, double mu, double gamma,
                             double alpha1, double alpha2, int n_max);

  /// Solves the well, derives gamma from the reservoir, then calls build.
  static GeneratorSpec from_params(const PhysicalParams& p, int n_max);

  /// Rates given directly (beta >= 0).  gamma, alpha1 and alpha2 are reported
  /// as zero for generators made this way.
  static GeneratorSpec from_rates(const BoundModeSpec& spec, double beta, double mu,
                                  double c_feed, double c_deph, int n_max);

  const BoundModeSpec& spec() const { return spec_; }
  double beta() const { return beta_; }
  double mu() const { return mu_; }
  double gamma() const { return gamma_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }
  double c_feed() const { return c_feed_; }
  double c_deph() const { return c_deph_; }

  /// H_B(n) for n in [0, n_max].
  double level(int n) const { return levels_[n]; }
  /// e^{beta (gap(n) - mu)}, the squared Q- enhancement, for n in [1, n_max].
  double depletion_factor(int n) const { return depletion_sq_[n]; }

  /// Transition rates of the population chain.
  double rate_up(int n) const;    // W(n -> n+1) = 2 c_feed (n+1)
  double rate_down(int n) const;  // W(n -> n-1) = 2 c_feed n e^{beta (gap(n) - mu)}

  /// Largest frequency in the generator, used to pick a stable step.
  double spectral_scale() const;

  const FeedDeplete& q_ops() const { return q_; }
  /// K = -i H_B - c_deph n^2 - c_feed (Q+^dag Q+ + Q-^dag Q-), so that the
  /// generator is K rho + rho K^dag + jump terms.
  const CMatrix& drift() const { return drift_; }
  const CMatrix& number() const { return number_; }

 private:
  GeneratorSpec(const BoundModeSpec& spec, double beta, double mu, double gamma, double alpha1,
                double alpha2, int n_max, double c_feed, double c_deph);

  BoundModeSpec spec_;
  double beta_, mu_, gamma_, alpha1_, alpha2_;
  int n_max_;
  double c_feed_, c_deph_;
  std::vector<double> levels_;
  std::vector<double> depletion_sq_;
  FeedDeplete q_;
  CMatrix drift_;
  CMatrix number_;
};

/// Dense action of the generator (matrix products).  Throws DimensionMismatch.
CMatrix apply_generator(const GeneratorSpec& g, const CMatrix& rho);
CMatrix apply_generator(const GeneratorSpec& g, const DensityMatrix& rho);

/// Tridiagonal action on band s (elements rho(j + s, j), j = 0..size-1):
///   out_j = diag_j x_j + sub_j x_{j-1} + sup_j x_{j+1}.
struct BandGenerator {
  int s = 0;
  int size = 0;
  Eigen::VectorXcd diag;
  Eigen::VectorXd sub;  // sub[0] unused (zero)
  Eigen::VectorXd sup;  // sup[size-1] unused (zero)

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const;
  /// Same band mirrored above the diagonal (elements rho(j, j + s)).
  void apply_mirror(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const;
};

/// Bands s = 0..n_max.
std::vector<BandGenerator> band_decompose(const GeneratorSpec& g);

/// Generator action through the bands; works for any square matrix.
CMatrix apply_banded(const std::vector<BandGenerator>& bands, const CMatrix& rho);

/// Lower-triangle band storage of a Hermitian matrix: band[s][j] = rho(j + s, j).
class BandedState {
 public:
  explicit BandedState(const CMatrix& hermitian);
  BandedState(int n_max, std::vector<Eigen::VectorXcd> bands);

  int n_max() const { return static_cast<int>(bands_.size()) - 1; }
  const std::vector<Eigen::VectorXcd>& bands() const { return bands_; }
  std::vector<Eigen::VectorXcd>& bands() { return bands_; }
  CMatrix to_matrix() const;

 private:
  std::vector<Eigen::VectorXcd> bands_;
};

struct SteadyState {
  DensityMatrix rho;
  RVector p;
  int mode = 0;
  double mean_n = 0.0;
  double residual = 0.0;
};

/// Stationary state from the detailed-balance product of the population
/// chain, audited against the generator residual.
SteadyState steady_state(const GeneratorSpec& g);

struct BalanceRow {
  int n = 0;
  double rate_up = 0.0;    // W(n -> n+1)
  double rate_down = 0.0;  // W(n+1 -> n)
  double ratio = 0.0;
  double predicted = 0.0;  // e^{-beta (gap(n+1) - mu)}
  double rel_error = 0.0;
};

/// Rows n = 0..n_max-1 comparing the generator's rate ratio with the thermal
/// factor.  Ratios are formed from rates per unit c_feed so the table is
/// defined for any c_feed.
std::vector<BalanceRow> detailed_balance_report(const GeneratorSpec& g);

}  // namespace trapmode
