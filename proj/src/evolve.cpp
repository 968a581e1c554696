#include "trapmode/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trapmode/errors.hpp"

namespace trapmode {

namespace {

// Banded states are stored as one flat vector, band s starting at offset[s].
class BandedSystem {
 public:
  explicit BandedSystem(const GeneratorSpec& g) : bands_(band_decompose(g)) {
    const int dim = g.dim();
    offset_.resize(dim + 1);
    offset_[0] = 0;
    for (int s = 0; s < dim; ++s) offset_[s + 1] = offset_[s] + (dim - s);
  }

  Eigen::VectorXcd pack(const CMatrix& rho) const {
    Eigen::VectorXcd v(offset_.back());
    for (const auto& b : bands_)
      for (int j = 0; j < b.size; ++j) v[offset_[b.s] + j] = rho(j + b.s, j);
    return v;
  }

  CMatrix unpack(const Eigen::VectorXcd& v) const {
    const int dim = static_cast<int>(bands_.size());
    CMatrix m(dim, dim);
    for (const auto& b : bands_)
      for (int j = 0; j < b.size; ++j) {
        const Complex x = v[offset_[b.s] + j];
        m(j + b.s, j) = x;
        if (b.s > 0) m(j, j + b.s) = std::conj(x);
      }
    return m;
  }

  Eigen::VectorXcd rhs(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(v.size());
    for (const auto& b : bands_) {
      const Complex* x = v.data() + offset_[b.s];
      Complex* y = out.data() + offset_[b.s];
      const int n = b.size;
      // Spelled out to keep the loop free of the checked complex multiply.
      for (int j = 0; j < n; ++j) {
        const double dr = b.diag[j].real(), di = b.diag[j].imag();
        double re = dr * x[j].real() - di * x[j].imag();
        double im = dr * x[j].imag() + di * x[j].real();
        if (j > 0) re += b.sub[j] * x[j - 1].real(), im += b.sub[j] * x[j - 1].imag();
        if (j + 1 < n) re += b.sup[j] * x[j + 1].real(), im += b.sup[j] * x[j + 1].imag();
        y[j] = Complex(re, im);
      }
    }
    return out;
  }

  void symmetrize(Eigen::VectorXcd& v) const {
    for (int j = 0; j < bands_[0].size; ++j) v[j] = Complex(v[j].real(), 0.0);
  }

  double trace(const Eigen::VectorXcd& v) const {
    double t = 0.0;
    for (int j = 0; j < bands_[0].size; ++j) t += v[j].real();
    return t;
  }

 private:
  std::vector<BandGenerator> bands_;
  std::vector<int> offset_;
};

class DenseSystem {
 public:
  explicit DenseSystem(const GeneratorSpec& g) : g_(g) {}
  CMatrix pack(const CMatrix& rho) const { return rho; }
  CMatrix unpack(const CMatrix& rho) const { return rho; }
  CMatrix rhs(const CMatrix& rho) const { return apply_generator(g_, rho); }
  void symmetrize(CMatrix& rho) const { rho = (0.5 * (rho + rho.adjoint())).eval(); }
  double trace(const CMatrix& rho) const { return rho.trace().real(); }

 private:
  const GeneratorSpec& g_;
};

template <class System, class State>
State rk4_step(const System& sys, const State& y, double h) {
  const State k1 = sys.rhs(y);
  const State k2 = sys.rhs((y + (0.5 * h) * k1).eval());
  const State k3 = sys.rhs((y + (0.5 * h) * k2).eval());
  const State k4 = sys.rhs((y + h * k3).eval());
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class State>
double max_abs(const State& y) {
  return y.cwiseAbs().maxCoeff();
}

template <class System, class State>
Trajectory run(const System& sys, const GeneratorSpec& g, const DensityMatrix& rho0,
               const IntegratorConfig& cfg) {
  Trajectory traj{cfg, cfg.resolved_dt(g), 0, {}, rho0};
  State y = sys.pack(rho0.matrix());

  std::vector<double> checkpoints;
  for (double c : cfg.checkpoints)
    if (c > 0.0 && c <= cfg.t_final) checkpoints.push_back(c);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::size_t next_cp = 0;

  auto emit = [&](double t, const State& state, bool with_pn) {
    if (!traj.records.empty() && t <= traj.records.back().t) {
      if (with_pn && !traj.records.back().p_n)
        traj.records.back().p_n = sys.unpack(state).diagonal().real();
      return;
    }
    const CMatrix rho = sys.unpack(state);
    ObservableRecord rec = observables(rho);
    rec.t = t;
    if (rec.min_eigenvalue < kPositivityTol)
      throw PositivityLost("minimum eigenvalue " + std::to_string(rec.min_eigenvalue) +
                           " at t = " + std::to_string(t));
    if (with_pn) rec.p_n = rho.diagonal().real();
    traj.records.push_back(std::move(rec));
  };

  auto check = [&](const State& state, double t) {
    if (!state.allFinite()) throw NonFiniteState("non-finite state at t = " + std::to_string(t));
    const double drift = std::abs(sys.trace(state) - 1.0);
    if (drift > kTraceDriftTol)
      throw StepSizeTooLarge("trace drift " + std::to_string(drift) + " at t = " +
                             std::to_string(t) + "; reduce dt");
  };

  emit(0.0, y, false);
  const double t_end = cfg.t_final;
  const double eps_t = 1e-12 * t_end;
  double t = 0.0;
  double h = traj.dt;
  if (cfg.mode == StepMode::fixed) {
    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(t_end / h - 1e-9)));
    h = t_end / n_steps;
    traj.dt = h;
    // The generator preserves the trace exactly, so an unstable step shows
    // up as growth rather than drift; refuse it before it starts.
    const double reach = h * g.spectral_scale();
    if (reach > kStabilityReach)
      throw StepSizeTooLarge("dt * spectral scale = " + std::to_string(reach) + " exceeds " +
                             std::to_string(kStabilityReach) + "; reduce dt");
  }

  long accepted = 0;
  while (t < t_end - eps_t) {
    const double target = next_cp < checkpoints.size() ? checkpoints[next_cp] : t_end;
    double step = std::min(h, target - t);
    const bool lands = step >= target - t - eps_t;
    if (lands) step = target - t;

    State next;
    if (cfg.mode == StepMode::fixed) {
      next = rk4_step(sys, y, step);
    } else {
      const State full = rk4_step(sys, y, step);
      const State half = rk4_step(sys, y, 0.5 * step);
      next = rk4_step(sys, half, 0.5 * step);
      const double err = max_abs((next - full).eval()) / 15.0;
      const double tol = cfg.abs_tol + cfg.rel_tol * max_abs(next);
      const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
      if (!(err <= tol) || !next.allFinite()) {
        h = step * std::clamp(std::isfinite(factor) ? factor : 0.2, 0.2, 0.9);
        if (h < 1e-14 * t_end) throw StepSizeTooLarge("adaptive step underflow");
        continue;
      }
      if (!lands || step >= h) h = step * std::clamp(factor, 0.2, 4.0);
    }
    sys.symmetrize(next);
    t = lands ? target : t + step;
    check(next, t);
    y = std::move(next);
    ++accepted;

    const bool at_cp = lands && next_cp < checkpoints.size();
    if (at_cp) ++next_cp;
    // Skip checkpoints the clock has already passed.
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t + eps_t) ++next_cp;
    if (at_cp) emit(t, y, true);
    if (accepted % cfg.record_every == 0) emit(t, y, false);
  }
  traj.steps = accepted;
  emit(t_end, y, false);
  traj.records.back().t = std::max(traj.records.back().t, t);
  traj.final_state = DensityMatrix(
      sys.unpack(y), StateTolerance{1e-12, kTraceDriftTol, kPositivityTol});
  return traj;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be > 0");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0 (or 0 for auto)");
  if (dt > 0.0 && dt > t_final) throw InvalidArgument("t_final must be >= dt");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("tolerances must be > 0");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
}

double IntegratorConfig::resolved_dt(const GeneratorSpec& g) const {
  if (dt > 0.0) return dt;
  const double scale = g.spectral_scale();
  if (!(scale > 0.0)) return t_final / 100.0;
  return std::min(t_final, 0.05 / scale);
}

Trajectory evolve(const GeneratorSpec& g, const DensityMatrix& rho0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (rho0.dim() != g.dim())
    throw DimensionMismatch("initial state dimension " + std::to_string(rho0.dim()) +
                            " does not match generator dimension " + std::to_string(g.dim()));
  if (cfg.backend == Backend::banded) return run<BandedSystem, Eigen::VectorXcd>(BandedSystem(g), g, rho0, cfg);
  return run<DenseSystem, CMatrix>(DenseSystem(g), g, rho0, cfg);
}

ObservableRecord observables(const CMatrix& rho) {
  const int dim = static_cast<int>(rho.rows());
  ObservableRecord rec;
  double mean = 0.0, second = 0.0, trace = 0.0;
  Complex coherence = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double p = rho(n, n).real();
    trace += p;
    mean += n * p;
    second += double(n) * n * p;
    if (n + 1 < dim) coherence += std::sqrt(double(n + 1)) * rho(n + 1, n);
  }
  rec.mean_n = mean;
  rec.var_n = second - mean * mean;
  rec.coherence_abs = std::abs(coherence);
  rec.coherence_arg = rec.coherence_abs > 0.0 ? std::arg(coherence) : 0.0;
  rec.purity = rho.cwiseProduct(rho.transpose()).sum().real();
  rec.trace_error = trace - 1.0;
  const RVector lambda = eigenvalues(rho);
  rec.min_eigenvalue = lambda.minCoeff();
  double entropy = 0.0;
  for (double l : lambda) {
    if (l <= 1e-12) continue;
    l = std::min(l, 1.0);
    entropy -= l * std::log(l);
  }
  rec.entropy = entropy;
  return rec;
}

std::vector<double> phase_distribution(const CMatrix& rho, int n_theta) {
  if (n_theta < 4) throw InvalidArgument("n_theta must be >= 4");
  const int dim = static_cast<int>(rho.rows());
  std::vector<Complex> band_sum(dim, 0.0);
  for (int s = 0; s < dim; ++s)
    for (int j = 0; j + s < dim; ++j) band_sum[s] += rho(j + s, j);
  std::vector<double> out(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_theta;
    double v = band_sum[0].real();
    for (int s = 1; s < dim; ++s)
      v += 2.0 * (std::polar(1.0, s * theta) * band_sum[s]).real();
    out[k] = v / (2.0 * std::numbers::pi);
  }
  return out;
}

double circular_variance(const std::vector<double>& density) {
  const int n = static_cast<int>(density.size());
  const double h = 2.0 * std::numbers::pi / n;
  Complex moment = 0.0;
  for (int k = 0; k < n; ++k) moment += density[k] * std::polar(h, k * h);
  return 1.0 - std::abs(moment);
}

double coherence_decay_rate(const GeneratorSpec& g, const DensityMatrix& rho0, double window,
                            int samples) {
  if (!(window > 0.0)) throw InvalidArgument("window must be > 0");
  if (samples < 2) throw InvalidArgument("samples must be >= 2");
  if (!(observables(rho0).coherence_abs > 1e-12))
    throw CoherenceTooSmall("initial state carries no coherence");
  IntegratorConfig cfg;
  cfg.t_final = window;
  cfg.backend = Backend::banded;
  cfg.record_every = std::numeric_limits<int>::max();
  for (int k = 1; k <= samples; ++k) cfg.checkpoints.push_back(window * k / samples);
  const Trajectory traj = evolve(g, rho0, cfg);

  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (const auto& rec : traj.records) {
    if (rec.coherence_abs < 1e-12)
      throw CoherenceTooSmall("coherence below 1e-12 at t = " + std::to_string(rec.t));
    const double y = std::log(rec.coherence_abs);
    st += rec.t;
    sy += y;
    stt += rec.t * rec.t;
    sty += rec.t * y;
    ++count;
  }
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  return -slope;
}

}  // namespace trapmode
