#pragma once

// Operators and states on the truncated number basis {|0>, ..., |n_max>}.

#include <Eigen/Dense>
#include <complex>

#include "trapmode/well.hpp"

namespace trapmode {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

class FockOperator {
 public:
  explicit FockOperator(CMatrix entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  int n_max() const { return dim() - 1; }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  FockOperator adjoint() const { return FockOperator(m_.adjoint()); }

 private:
  CMatrix m_;
};

struct LadderOps {
  FockOperator lower;
  FockOperator raise;
  FockOperator number;
};

LadderOps ladder_ops(int n_max);

/// H_B(n) = -E_b n + E_r n (n - 1).
double hb_level(const BoundModeSpec& spec, int n);

FockOperator hamiltonian_HB(const BoundModeSpec& spec, int n_max);

/// Energy released when the n-th particle enters the mode:
/// H_B(n) - H_B(n-1) = -E_b + 2 E_r (n - 1).  Requires n >= 1.
double gap(const BoundModeSpec& spec, int n);

/// Quantized Ginzburg-Landau potential -(E_b + mu) n + E_r n (n - 1).
double gl_potential(const BoundModeSpec& spec, double mu, int n);

/// Smallest n in [0, n_max] minimising gl_potential.
int gl_argmin(const BoundModeSpec& spec, double mu, int n_max);

/// (beta/2)(gap(n) - mu): log of the Q- enhancement factor for the n -> n-1
/// transition.  Throws ParameterOverflow when it exceeds 300.
double depletion_log_factor(const BoundModeSpec& spec, double beta, double mu, int n);

struct FeedDeplete {
  FockOperator q_plus;   // raise, truncated so that Q+|n_max> = 0
  FockOperator q_minus;  // e^{(beta/2)(gap - mu)} to the left of lower
};

FeedDeplete build_Q(const BoundModeSpec& spec, double beta, double mu, int n_max);

struct StateTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-10;
  double min_eigenvalue = -1e-10;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws InvalidState.
  explicit DensityMatrix(CMatrix entries, const StateTolerance& tol = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  int n_max() const { return dim() - 1; }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  RVector populations() const { return m_.diagonal().real(); }

 private:
  CMatrix m_;
};

double hermiticity_error(const CMatrix& m);
double min_eigenvalue(const CMatrix& hermitian);
RVector eigenvalues(const CMatrix& hermitian);

/// Half the trace norm of the difference.
double trace_distance(const CMatrix& a, const CMatrix& b);

DensityMatrix state_vacuum(int n_max);
DensityMatrix state_fock(int n, int n_max);
DensityMatrix state_coherent(Complex alpha, int n_max);

/// Z^{-1} exp(beta (mu n - H_B)) on the truncated basis.  Throws
/// TruncationTooSmall when p(n_max) >= 1e-8.
DensityMatrix state_grand_canonical(const BoundModeSpec& spec, double beta, double mu,
                                    int n_max);

inline constexpr double kTruncationTail = 1e-8;

}  // namespace trapmode
