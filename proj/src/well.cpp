#include "trapmode/well.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>

#include "trapmode/errors.hpp"

namespace trapmode {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBracketNudge = 1e-9;

template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, lo + h);
  }
  return sum;
}

// Root of f on [lo, hi] with f(lo) > 0 > f(hi).  Bisection keeps the bracket;
// a secant step replaces the midpoint whenever it lands inside it.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  for (int iter = 0; iter < 400; ++iter) {
    double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi) || iter % 3 == 2) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= tol) return x;
    if (fx > 0.0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
  }
  throw NonConvergent("bound-state root search did not converge");
}

}  // namespace

WellSpec WellSpec::from_params(const PhysicalParams& p) {
  return WellSpec{p.well_strength_sq, p.well_radius};
}

double WellSpec::strength() const { return std::sqrt(depth) * radius; }

void WellSpec::validate() const {
  if (!(std::isfinite(depth) && depth > 0.0)) throw InvalidArgument("well depth must be > 0");
  if (!(std::isfinite(radius) && radius > 0.0)) throw InvalidArgument("well radius must be > 0");
}

int count_s_bound_states(const WellSpec& w) {
  w.validate();
  const double s0 = w.strength();
  int count = 0;
  while ((2 * count + 1) * (kPi / 2.0) < s0) ++count;
  return count;
}

double matching_residual(const WellSpec& w, double q) {
  return q / std::tan(q * w.radius) + std::sqrt(w.depth - q * q);
}

BoundState solve_bound_state(const WellSpec& w, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("root tolerance must be > 0");
  const int count = count_s_bound_states(w);
  if (count == 0) throw NoBoundState("well strength " + std::to_string(w.strength()) +
                                     " does not exceed pi/2");
  if (count > 1) throw MultipleBoundStates(std::to_string(count) + " s-wave bound states");

  const double lo = kPi / (2.0 * w.radius) + kBracketNudge;
  const double hi = std::min(std::sqrt(w.depth), kPi / w.radius) - kBracketNudge;
  const double q = bracketed_root([&](double x) { return matching_residual(w, x); }, lo, hi, tol);

  BoundState b;
  b.q = q;
  b.kappa = std::sqrt(w.depth - q * q);
  b.E_b = b.kappa * b.kappa;
  const double R = w.radius;
  const double s = std::sin(q * R);
  const double chi_sq = R / 2.0 - std::sin(2.0 * q * R) / (4.0 * q) + s * s / (2.0 * b.kappa);
  b.norm_A = 1.0 / std::sqrt(4.0 * kPi * chi_sq);
  b.norm_B = b.norm_A * s * std::exp(b.kappa * R);
  return b;
}

double bound_wavefunction(const BoundState& b, const WellSpec& w, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("radius must be >= 0");
  if (r < w.radius) {
    if (r == 0.0) return b.norm_A * b.q;
    return b.norm_A * std::sin(b.q * r) / r;
  }
  return b.norm_B * std::exp(-b.kappa * r) / r;
}

double norm_integral(const BoundState& b, const WellSpec& w, int panels) {
  const double R = w.radius;
  const double inner = composite_gauss(
      [&](double r) {
        const double s = std::sin(b.q * r);
        return s * s;
      },
      0.0, R, panels);
  const double outer = std::exp(-2.0 * b.kappa * R) / (2.0 * b.kappa);
  return 4.0 * kPi * (b.norm_A * b.norm_A * inner + b.norm_B * b.norm_B * outer);
}

double quartic_overlap(const BoundState& b, const WellSpec& w, int panels) {
  if (panels < 1) throw InvalidArgument("panels must be >= 1");
  const double R = w.radius;
  // r^2 u^4 = A^4 sin^4(q r) / r^2, regular at the origin.
  const double inner = composite_gauss(
      [&](double r) {
        if (r == 0.0) return 0.0;
        const double s = std::sin(b.q * r);
        return s * s * s * s / (r * r);
      },
      0.0, R, panels);
  // integral_R^inf e^{-a r} / r^2 dr = e^{-a R}/R - a E1(a R), a = 4 kappa.
  const double a = 4.0 * b.kappa;
  const double outer = std::exp(-a * R) / R - a * boost::math::expint(1, a * R);
  const double A2 = b.norm_A * b.norm_A;
  const double B2 = b.norm_B * b.norm_B;
  const double radial = A2 * A2 * inner + B2 * B2 * outer;
  return 4.0 * kPi * (4.0 * kPi * radial);
}

double repulsion_energy(const BoundState& b, const WellSpec& w, double a_lambda) {
  if (!(a_lambda >= 0.0)) throw InvalidArgument("a_lambda must be >= 0");
  if (a_lambda == 0.0) return 0.0;
  return a_lambda * quartic_overlap(b, w);
}

BoundModeSpec bound_mode_spec(const PhysicalParams& p) {
  p.validate();
  const WellSpec w = WellSpec::from_params(p);
  const BoundState b = solve_bound_state(w);
  return BoundModeSpec{b.E_b, repulsion_energy(b, w, p.a_lambda)};
}

}  // namespace trapmode
