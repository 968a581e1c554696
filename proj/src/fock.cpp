#include "trapmode/fock.hpp"

#include <cmath>
#include <limits>

#include "trapmode/errors.hpp"

namespace trapmode {

namespace {

void require_n_max(int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
}

CMatrix diagonal_matrix(const Eigen::VectorXcd& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  m.diagonal() = d;
  return m;
}

DensityMatrix pure_state(const Eigen::VectorXcd& amplitudes) {
  const Eigen::VectorXcd psi = amplitudes / amplitudes.norm();
  return DensityMatrix(psi * psi.adjoint());
}

}  // namespace

FockOperator::FockOperator(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2)
    throw DimensionMismatch("Fock operators are square with dim >= 2");
  if (!m_.allFinite()) throw InvalidArgument("Fock operator has non-finite entries");
}

LadderOps ladder_ops(int n_max) {
  require_n_max(n_max);
  const int dim = n_max + 1;
  CMatrix lower = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix number = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) number(n, n) = static_cast<double>(n);
  CMatrix raise = lower.adjoint();
  return {FockOperator(std::move(lower)), FockOperator(std::move(raise)),
          FockOperator(std::move(number))};
}

double hb_level(const BoundModeSpec& spec, int n) {
  const double x = n;
  return -spec.E_b * x + spec.E_r * x * (x - 1.0);
}

FockOperator hamiltonian_HB(const BoundModeSpec& spec, int n_max) {
  require_n_max(n_max);
  Eigen::VectorXcd d(n_max + 1);
  for (int n = 0; n <= n_max; ++n) d(n) = hb_level(spec, n);
  return FockOperator(diagonal_matrix(d));
}

double gap(const BoundModeSpec& spec, int n) {
  if (n < 1) throw InvalidArgument("gap is defined for n >= 1");
  return -spec.E_b + 2.0 * spec.E_r * (n - 1);
}

double gl_potential(const BoundModeSpec& spec, double mu, int n) {
  if (n < 0) throw InvalidArgument("occupation must be >= 0");
  const double x = n;
  return -(spec.E_b + mu) * x + spec.E_r * x * (x - 1.0);
}

int gl_argmin(const BoundModeSpec& spec, double mu, int n_max) {
  int best = 0;
  double best_v = gl_potential(spec, mu, 0);
  for (int n = 1; n <= n_max; ++n) {
    const double v = gl_potential(spec, mu, n);
    if (v < best_v) {
      best_v = v;
      best = n;
    }
  }
  return best;
}

double depletion_log_factor(const BoundModeSpec& spec, double beta, double mu, int n) {
  const double x = 0.5 * beta * (gap(spec, n) - mu);
  if (x > 300.0)
    throw ParameterOverflow("(beta/2)(gap(" + std::to_string(n) + ") - mu) = " +
                            std::to_string(x) + " exceeds 300; reduce n_max or beta");
  return x;
}

FeedDeplete build_Q(const BoundModeSpec& spec, double beta, double mu, int n_max) {
  require_n_max(n_max);
  const int dim = n_max + 1;
  CMatrix q_plus = CMatrix::Zero(dim, dim);
  CMatrix q_minus = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double root_n = std::sqrt(static_cast<double>(n));
    q_plus(n, n - 1) = root_n;
    q_minus(n - 1, n) = std::exp(depletion_log_factor(spec, beta, mu, n)) * root_n;
  }
  return {FockOperator(std::move(q_plus)), FockOperator(std::move(q_minus))};
}

DensityMatrix::DensityMatrix(CMatrix entries, const StateTolerance& tol) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2)
    throw DimensionMismatch("density matrices are square with dim >= 2");
  if (!m_.allFinite()) throw InvalidState("non-finite entries");
  const double herm = hermiticity_error(m_);
  if (herm > tol.hermiticity)
    throw InvalidState("Hermiticity error " + std::to_string(herm));
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) throw InvalidState("trace " + std::to_string(tr));
  const double lmin = min_eigenvalue(m_);
  if (lmin < tol.min_eigenvalue)
    throw InvalidState("negative eigenvalue " + std::to_string(lmin));
}

double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RVector eigenvalues(const CMatrix& hermitian) {
  const CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const CMatrix& hermitian) { return eigenvalues(hermitian).minCoeff(); }

double trace_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * eigenvalues(a - b).cwiseAbs().sum();
}

DensityMatrix state_vacuum(int n_max) { return state_fock(0, n_max); }

DensityMatrix state_fock(int n, int n_max) {
  require_n_max(n_max);
  if (n < 0 || n > n_max) throw InvalidArgument("Fock index outside [0, n_max]");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n_max + 1);
  psi(n) = 1.0;
  return pure_state(psi);
}

DensityMatrix state_coherent(Complex alpha, int n_max) {
  require_n_max(n_max);
  if (std::norm(alpha) > n_max / 4.0)
    throw InvalidArgument("coherent amplitude |alpha|^2 exceeds n_max/4");
  Eigen::VectorXcd psi(n_max + 1);
  psi(0) = 1.0;
  for (int n = 1; n <= n_max; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return pure_state(psi);
}

DensityMatrix state_grand_canonical(const BoundModeSpec& spec, double beta, double mu,
                                    int n_max) {
  require_n_max(n_max);
  RVector log_w(n_max + 1);
  for (int n = 0; n <= n_max; ++n) log_w(n) = beta * (mu * n - hb_level(spec, n));
  const RVector w = (log_w.array() - log_w.maxCoeff()).exp();
  const RVector p = w / w.sum();
  if (!(p(n_max) < kTruncationTail))
    throw TruncationTooSmall("p(n_max) = " + std::to_string(p(n_max)) + " >= 1e-8");
  CMatrix rho = CMatrix::Zero(n_max + 1, n_max + 1);
  rho.diagonal() = p.cast<Complex>();
  return DensityMatrix(std::move(rho));
}

}  // namespace trapmode
