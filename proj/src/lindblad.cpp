#include "trapmode/lindblad.hpp"

#include <cmath>

#include "trapmode/errors.hpp"

namespace trapmode {

namespace {

constexpr double kResidualTol = 1e-8;

}  // namespace

GeneratorSpec::GeneratorSpec(const BoundModeSpec& spec, double beta, double mu, double gamma,
                             double alpha1, double alpha2, int n_max, double c_feed,
                             double c_deph)
    : spec_(spec),
      beta_(beta),
      mu_(mu),
      gamma_(gamma),
      alpha1_(alpha1),
      alpha2_(alpha2),
      n_max_(n_max),
      c_feed_(c_feed),
      c_deph_(c_deph),
      q_(build_Q(spec, beta, mu, n_max)) {
  if (!(c_feed_ >= 0.0) || !std::isfinite(c_feed_)) throw InvalidArgument("c_feed must be >= 0");
  if (!(c_deph_ >= 0.0) || !std::isfinite(c_deph_)) throw InvalidArgument("c_deph must be >= 0");
  levels_.resize(n_max + 1);
  depletion_sq_.assign(n_max + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) levels_[n] = hb_level(spec, n);
  for (int n = 1; n <= n_max; ++n)
    depletion_sq_[n] = std::exp(2.0 * depletion_log_factor(spec, beta, mu, n));

  number_ = ladder_ops(n_max).number.matrix();
  const CMatrix& qp = q_.q_plus.matrix();
  const CMatrix& qm = q_.q_minus.matrix();
  const CMatrix h = hamiltonian_HB(spec, n_max).matrix();
  drift_ = Complex(0.0, -1.0) * h - c_deph_ * (number_ * number_) -
           c_feed_ * (qp.adjoint() * qp + qm.adjoint() * qm);
}

GeneratorSpec GeneratorSpec::build(const BoundModeSpec& spec, double beta, double mu,
                                   double gamma, double alpha1, double alpha2, int n_max) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be > 0");
  if (!(spec.E_b > 0.0)) throw InvalidArgument("E_b must be > 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0)) throw InvalidArgument("alpha1, alpha2 must be >= 0");
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  const double c_feed = alpha1 * gamma * std::exp(beta * mu) / (beta * spec.E_b);
  const double c_deph = alpha2 * gamma;
  return GeneratorSpec(spec, beta, mu, gamma, alpha1, alpha2, n_max, c_feed, c_deph);
}

GeneratorSpec GeneratorSpec::from_params(const PhysicalParams& p, int n_max) {
  const BoundModeSpec spec = bound_mode_spec(p);
  const ReservoirDerived r = derive_reservoir(p);
  return build(spec, p.beta, p.mu, r.gamma, p.alpha1, p.alpha2, n_max);
}

GeneratorSpec GeneratorSpec::from_rates(const BoundModeSpec& spec, double beta, double mu,
                                        double c_feed, double c_deph, int n_max) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  return GeneratorSpec(spec, beta, mu, 0.0, 0.0, 0.0, n_max, c_feed, c_deph);
}

double GeneratorSpec::rate_up(int n) const {
  if (n < 0 || n >= n_max_) return 0.0;
  return 2.0 * c_feed_ * (n + 1);
}

double GeneratorSpec::rate_down(int n) const {
  if (n < 1 || n > n_max_) return 0.0;
  return 2.0 * c_feed_ * n * depletion_sq_[n];
}

double GeneratorSpec::spectral_scale() const {
  double max_factor = 0.0;
  for (int n = 1; n <= n_max_; ++n) max_factor = std::max(max_factor, depletion_sq_[n]);
  const double hamiltonian = std::abs(levels_[n_max_] - levels_[0]);
  const double dephasing = c_deph_ * n_max_ * n_max_;
  const double feeding = 2.0 * c_feed_ * n_max_ * std::max(1.0, max_factor);
  return std::max({hamiltonian, dephasing, feeding});
}

CMatrix apply_generator(const GeneratorSpec& g, const CMatrix& rho) {
  if (rho.rows() != g.dim() || rho.cols() != g.dim())
    throw DimensionMismatch("state dimension " + std::to_string(rho.rows()) +
                            " does not match generator dimension " + std::to_string(g.dim()));
  const CMatrix& k = g.drift();
  const CMatrix& n = g.number();
  const CMatrix& qp = g.q_ops().q_plus.matrix();
  const CMatrix& qm = g.q_ops().q_minus.matrix();
  CMatrix out = k * rho;
  out.noalias() += rho * k.adjoint();
  if (g.c_deph() != 0.0) out += (2.0 * g.c_deph()) * (n * rho * n);
  if (g.c_feed() != 0.0)
    out += (2.0 * g.c_feed()) * (qp * rho * qp.adjoint() + qm * rho * qm.adjoint());
  return out;
}

CMatrix apply_generator(const GeneratorSpec& g, const DensityMatrix& rho) {
  return apply_generator(g, rho.matrix());
}

SteadyState steady_state(const GeneratorSpec& g) {
  if (!(g.c_feed() > 0.0))
    throw NoUniqueFixedPoint("populations are frozen without feeding (c_feed = 0)");
  const int n_max = g.n_max();
  // p(n)/p(n-1) = W(n-1 -> n) / W(n -> n-1) = e^{-beta (gap(n) - mu)}.
  RVector log_p(n_max + 1);
  log_p(0) = 0.0;
  for (int n = 1; n <= n_max; ++n)
    log_p(n) = log_p(n - 1) - 2.0 * depletion_log_factor(g.spec(), g.beta(), g.mu(), n);
  RVector p = (log_p.array() - log_p.maxCoeff()).exp();
  p /= p.sum();
  if (!(p(n_max) < kTruncationTail))
    throw TruncationTooSmall("stationary p(n_max) = " + std::to_string(p(n_max)) +
                             " >= 1e-8; increase n_max");

  CMatrix rho = CMatrix::Zero(n_max + 1, n_max + 1);
  rho.diagonal() = p.cast<Complex>();
  const double residual = apply_generator(g, rho).cwiseAbs().maxCoeff();
  if (!(residual <= kResidualTol * std::max(1.0, g.spectral_scale())))
    throw NonConvergent("steady-state residual " + std::to_string(residual));

  int mode = 0;
  p.maxCoeff(&mode);
  double mean = 0.0;
  for (int n = 0; n <= n_max; ++n) mean += n * p(n);
  return SteadyState{DensityMatrix(std::move(rho)), std::move(p), mode, mean, residual};
}

std::vector<BalanceRow> detailed_balance_report(const GeneratorSpec& g) {
  std::vector<BalanceRow> rows;
  rows.reserve(g.n_max());
  for (int n = 0; n < g.n_max(); ++n) {
    BalanceRow row;
    row.n = n;
    row.rate_up = g.rate_up(n);
    row.rate_down = g.rate_down(n + 1);
    // Per unit c_feed: 2(n+1) up, 2(n+1) e^{beta(gap - mu)} down.
    const double up = 2.0 * (n + 1);
    const double down = 2.0 * (n + 1) * g.depletion_factor(n + 1);
    row.ratio = up / down;
    row.predicted = std::exp(-g.beta() * (gap(g.spec(), n + 1) - g.mu()));
    row.rel_error = std::abs(row.ratio - row.predicted) / row.predicted;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace trapmode
