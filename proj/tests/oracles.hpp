#pragma once

// Test-only reference computations.  Nothing here calls into the library's
// numerical paths; each oracle rebuilds its quantity from the defining
// formula with a different method.

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline double hb(double E_b, double E_r, int n) { return -E_b * n + E_r * n * (n - 1.0); }
inline double gap(double E_b, double E_r, int n) { return hb(E_b, E_r, n) - hb(E_b, E_r, n - 1); }

// Maxwell-Boltzmann average of gamma_k = 2 k sigma d with weight k^2 e^{-beta k^2}.
inline double mb_average_rate(double beta, double sigma, double density) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto weight = [&](double k) { return k * k * std::exp(-beta * k * k); };
  const double num = integrator.integrate([&](double k) { return 2.0 * k * sigma * density * weight(k); });
  const double den = integrator.integrate(weight);
  return num / den;
}

struct WellSolution {
  double q, kappa, E_b, J, norm;
};

// Bound state by TOMS 748, then normalisation and 4 pi int u^4 d^3r by
// adaptive Gauss-Kronrod on the interior and exp-sinh on the exterior.
inline WellSolution solve_well(double depth, double radius) {
  auto f = [&](double q) { return q / std::tan(q * radius) + std::sqrt(depth - q * q); };
  const double lo = std::numbers::pi / (2.0 * radius) + 1e-12;
  const double hi = std::min(std::sqrt(depth), std::numbers::pi / radius) - 1e-12;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double q = 0.5 * (r.first + r.second);
  const double kappa = std::sqrt(depth - q * q);
  auto chi = [&](double x) {
    return x < radius ? std::sin(q * x) : std::sin(q * radius) * std::exp(-kappa * (x - radius));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  boost::math::quadrature::exp_sinh<double> tail;
  const double pi = std::numbers::pi;
  const double in2 = GK::integrate([&](double x) { return chi(x) * chi(x); }, 0.0, radius, 15, 1e-15);
  const double out2 = tail.integrate([&](double x) { return chi(x) * chi(x); }, radius,
                                     std::numeric_limits<double>::infinity());
  const double c2 = 1.0 / (4.0 * pi * (in2 + out2));  // A^2
  auto chi4_r2 = [&](double x) {
    if (x == 0.0) return 0.0;
    const double c = chi(x);
    return c * c * c * c / (x * x);
  };
  const double in4 = GK::integrate(chi4_r2, 0.0, radius, 15, 1e-15);
  const double out4 = tail.integrate(chi4_r2, radius, std::numeric_limits<double>::infinity());
  const double J = 4.0 * pi * 4.0 * pi * c2 * c2 * (in4 + out4);
  return {q, kappa, kappa * kappa, J, 4.0 * pi * c2 * (in2 + out2)};
}

// Direct summation of the Gibbs weights e^{beta (mu n - H_B(n))}.
inline std::vector<double> gibbs(double E_b, double E_r, double beta, double mu, int n_max) {
  std::vector<double> w(n_max + 1);
  double z = 0.0;
  for (int n = 0; n <= n_max; ++n) z += (w[n] = std::exp(beta * (mu * n - hb(E_b, E_r, n))));
  for (auto& x : w) x /= z;
  return w;
}

inline double mean(const std::vector<double>& p) {
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += n * p[n];
  return m;
}

// Rate matrix of the classical population chain, with rates read from the
// jump operators: up 2 c (n+1), down 2 c n e^{beta (gap(n) - mu)}.
inline Eigen::MatrixXd birth_death_matrix(double E_b, double E_r, double beta, double mu,
                                          double c_feed, int n_max) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (n < n_max) {
      const double up = 2.0 * c_feed * (n + 1);
      w(n + 1, n) += up;
      w(n, n) -= up;
    }
    if (n > 0) {
      const double down = 2.0 * c_feed * n * std::exp(beta * (gap(E_b, E_r, n) - mu));
      w(n - 1, n) += down;
      w(n, n) -= down;
    }
  }
  return w;
}

inline Eigen::VectorXd birth_death_evolve(const Eigen::MatrixXd& w, const Eigen::VectorXd& p0,
                                          double t) {
  const Eigen::MatrixXd m = w * t;
  return m.exp() * p0;
}

// Full Liouvillian on column-stacked vec(rho) from explicit operator
// matrices, vec(A X B) = (B^T kron A) vec(X).
inline CMatrix liouvillian(double E_b, double E_r, double beta, double mu, double c_feed,
                           double c_deph, int n_max) {
  const int d = n_max + 1;
  CMatrix h = CMatrix::Zero(d, d), num = CMatrix::Zero(d, d), qp = CMatrix::Zero(d, d),
          qm = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    h(n, n) = hb(E_b, E_r, n);
    num(n, n) = n;
  }
  for (int n = 1; n < d; ++n) {
    qp(n, n - 1) = std::sqrt(double(n));
    qm(n - 1, n) = std::exp(0.5 * beta * (gap(E_b, E_r, n) - mu)) * std::sqrt(double(n));
  }
  const CMatrix id = CMatrix::Identity(d, d);
  auto left = [&](const CMatrix& a) -> CMatrix { return Eigen::kroneckerProduct(id, a); };
  auto right = [&](const CMatrix& b) -> CMatrix { return Eigen::kroneckerProduct(b.transpose(), id); };
  auto sandwich = [&](const CMatrix& a, const CMatrix& b) -> CMatrix {
    return Eigen::kroneckerProduct(b.transpose(), a);
  };
  const Complex i(0.0, 1.0);
  CMatrix l = i * (right(h) - left(h));
  const CMatrix n2 = num * num;
  l -= c_deph * (left(n2) + right(n2) - 2.0 * sandwich(num, num));
  for (const CMatrix* q : {&qp, &qm}) {
    const CMatrix qq = q->adjoint() * *q;
    l -= c_feed * (left(qq) + right(qq) - 2.0 * sandwich(*q, q->adjoint()));
  }
  return l;
}

// Null vector of the Liouvillian reshaped into a unit-trace matrix.
inline CMatrix liouvillian_fixed_point(const CMatrix& l, int dim) {
  Eigen::JacobiSVD<CMatrix> svd(l, Eigen::ComputeFullV);
  const Eigen::VectorXcd v = svd.matrixV().col(l.cols() - 1);
  CMatrix rho = Eigen::Map<const CMatrix>(v.data(), dim, dim);
  return rho / rho.trace();
}

inline CMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline CMatrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  return a;
}

// rho(m, n, t) under pure dephasing plus the diagonal Hamiltonian.
inline CMatrix dephasing_solution(const CMatrix& rho0, double E_b, double E_r, double c_deph,
                                  double t) {
  CMatrix out = rho0;
  for (int m = 0; m < rho0.rows(); ++m)
    for (int n = 0; n < rho0.cols(); ++n) {
      const double s = m - n;
      out(m, n) *= std::exp(-c_deph * s * s * t) *
                   std::polar(1.0, -(hb(E_b, E_r, m) - hb(E_b, E_r, n)) * t);
    }
  return out;
}

}  // namespace oracle
