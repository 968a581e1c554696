#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "trapmode/errors.hpp"
#include "trapmode/fock.hpp"

using namespace trapmode;

TEST_CASE("ladder operators on the truncated basis") {
  const auto ops = ladder_ops(2);
  CHECK(ops.lower(1, 2).real() == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(ops.lower(1, 2).real() == std::sqrt(2.0));
  const auto l = ladder_ops(7);
  CHECK((l.raise.matrix() * l.lower.matrix() - l.number.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(l.raise.matrix() == l.lower.matrix().adjoint());
  CHECK(l.lower.matrix().col(0).cwiseAbs().maxCoeff() == 0.0);
  // Truncated raise annihilates the top level.
  CHECK(l.raise.matrix().col(7).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(ladder_ops(0), InvalidArgument);
}

TEST_CASE("bound mode Hamiltonian and gap") {
  const BoundModeSpec spec{1.0, 0.1};
  const auto h = hamiltonian_HB(spec, 5);
  CHECK(h(0, 0).real() == 0.0);
  CHECK(h(1, 1).real() == -1.0);
  CHECK(h(3, 3).real() == doctest::Approx(-2.4).epsilon(1e-15));
  CHECK((h.matrix() - CMatrix(h.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  CHECK(gap(spec, 1) == -1.0);
  CHECK(gap(spec, 2) == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK_THROWS_AS(gap(spec, 0), InvalidArgument);
}

TEST_CASE("gap matches the interaction-picture rotation of the lowering operator") {
  const BoundModeSpec spec{0.457, 0.013};
  const int n_max = 12;
  const double t = 1.7;
  const auto ops = ladder_ops(n_max);
  const CMatrix h = hamiltonian_HB(spec, n_max).matrix();
  // e^{iHt} psi e^{-iHt} versus e^{i(E_b - 2 E_r n) t} psi.
  const CMatrix u = (Complex(0, 1) * t * h).exp();
  const CMatrix heisenberg = u * ops.lower.matrix() * u.adjoint();
  CMatrix rotation = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) rotation(n, n) = std::polar(1.0, (spec.E_b - 2.0 * spec.E_r * n) * t);
  const CMatrix interaction = rotation * ops.lower.matrix();
  CHECK((heisenberg - interaction).cwiseAbs().maxCoeff() < 1e-12);
  for (int n = 1; n <= n_max; ++n) {
    const Complex expected = std::polar(std::sqrt(double(n)), -gap(spec, n) * t);
    CHECK(std::abs(interaction(n - 1, n) - expected) < 1e-12);
  }
}

TEST_CASE("Ginzburg-Landau potential differences are gap minus mu") {
  const BoundModeSpec spec{0.457, 0.0093};
  const double mu = -0.4;
  CHECK(gl_potential(spec, mu, 0) == 0.0);
  for (int n = 1; n <= 50; ++n)
    CHECK(gap(spec, n) - mu ==
          doctest::Approx(gl_potential(spec, mu, n) - gl_potential(spec, mu, n - 1)).epsilon(1e-13));
}

TEST_CASE("Ginzburg-Landau argmin by brute force") {
  const BoundModeSpec spec{1.0, 0.3};
  const double mu = -0.5;
  int best = 0;
  for (int n = 1; n <= 100; ++n)
    if (-(1.0 + mu) * n + 0.3 * n * (n - 1.0) < -(1.0 + mu) * best + 0.3 * best * (best - 1.0)) best = n;
  CHECK(best == 1);
  CHECK(gl_argmin(spec, mu, 100) == 1);
  CHECK((mu + spec.E_b + spec.E_r) / (2.0 * spec.E_r) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("feeding and depleting operators") {
  const BoundModeSpec spec{1.0, 0.1};
  SUBCASE("beta = 0 gives the plain lowering operator") {
    const auto q = build_Q(spec, 0.0, -0.5, 6);
    CHECK((q.q_minus.matrix() - ladder_ops(6).lower.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((q.q_plus.matrix() - ladder_ops(6).raise.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("closed-form element") {
    const auto q = build_Q(spec, 1.0, -0.5, 4);
    CHECK(q.q_minus(1, 2).real() == doctest::Approx(std::exp(-0.15) * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.q_minus(1, 2).real() == doctest::Approx(1.2172249).epsilon(1e-7));
  }
  SUBCASE("detailed-balance element ratio and Q^dag Q diagonals") {
    const double beta = 2.3, mu = -0.7;
    const int n_max = 15;
    const auto q = build_Q(spec, beta, mu, n_max);
    for (int n = 1; n <= n_max; ++n) {
      const double ratio = q.q_minus(n - 1, n).real() / q.q_plus(n, n - 1).real();
      CHECK(ratio == doctest::Approx(std::exp(0.5 * beta * (gap(spec, n) - mu))).epsilon(1e-14));
    }
    const CMatrix pp = q.q_plus.matrix().adjoint() * q.q_plus.matrix();
    const CMatrix mm = q.q_minus.matrix().adjoint() * q.q_minus.matrix();
    for (int n = 0; n <= n_max; ++n) {
      CHECK(pp(n, n).real() == doctest::Approx(n < n_max ? n + 1.0 : 0.0));
      const double expect = n == 0 ? 0.0 : n * std::exp(beta * (gap(spec, n) - mu));
      CHECK(mm(n, n).real() == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK((pp - CMatrix(pp.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    CHECK((mm - CMatrix(mm.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("overflow guard") {
    CHECK_THROWS_AS(build_Q({1.0, 1.0}, 10.0, -1.0, 40), ParameterOverflow);
  }
}

TEST_CASE("pure state constructors") {
  const auto vac = state_vacuum(5);
  CHECK(vac(0, 0).real() == 1.0);
  CHECK((vac.matrix() * vac.matrix()).trace().real() == doctest::Approx(1.0));
  const auto f = state_fock(3, 6);
  CHECK(f(3, 3).real() == 1.0);
  CHECK_THROWS_AS(state_fock(7, 6), InvalidArgument);
  CHECK(((state_coherent(0.0, 5).matrix() - vac.matrix()).cwiseAbs().maxCoeff()) == 0.0);

  const auto c = state_coherent({1.2, -0.4}, 24);
  double mean = 0.0;
  for (int n = 0; n <= 24; ++n) mean += n * c(n, n).real();
  CHECK(mean == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(std::abs(c.matrix().trace() - 1.0) < 1e-14);
  CHECK_THROWS_AS(state_coherent(3.0, 20), InvalidArgument);
}

TEST_CASE("density matrix invariants are enforced") {
  CMatrix bad = CMatrix::Zero(3, 3);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidState);  // trace
  bad(1, 1) = 0.5;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidState);  // not Hermitian
  bad(1, 0) = 0.1;
  CHECK_NOTHROW(DensityMatrix{bad});
  bad(0, 1) = bad(1, 0) = 0.7;
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidState);  // negative eigenvalue
}

TEST_CASE("grand canonical state") {
  SUBCASE("lowest two levels") {
    // n_max = 1 cannot meet the tail bound; p1/p0 does not depend on the
    // truncation, so read it off a taller basis.
    const auto gc = state_grand_canonical({1.0, 0.3}, 1.0, -0.5, 10);
    CHECK(gc(1, 1).real() / gc(0, 0).real() == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(std::exp(0.5) == doctest::Approx(1.648721).epsilon(1e-6));
    CHECK_THROWS_AS(state_grand_canonical({1.0, 0.0}, 1.0, -0.5, 1), TruncationTooSmall);
  }
  SUBCASE("mean occupation against direct summation") {
    const auto gc = state_grand_canonical({1.0, 0.3}, 1.0, -0.5, 10);
    const auto p = oracle::gibbs(1.0, 0.3, 1.0, -0.5, 10);
    double mean = 0.0;
    for (int n = 0; n <= 10; ++n) {
      CHECK(gc(n, n).real() == doctest::Approx(p[n]).epsilon(1e-13));
      mean += n * gc(n, n).real();
    }
    CHECK(mean == doctest::Approx(1.5302964038554505).epsilon(1e-12));
    CHECK(mean == doctest::Approx(oracle::mean(p)).epsilon(1e-13));
    CHECK((gc.matrix() - CMatrix(gc.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("Gibbs form of H_B - mu n, evaluated matrix-free") {
    const BoundModeSpec spec{0.457, 0.0093};
    const double beta = 11.0, mu = -0.45;
    const int n_max = 120;
    const auto gc = state_grand_canonical(spec, beta, mu, n_max);
    RVector w(n_max + 1);
    for (int n = 0; n <= n_max; ++n) w(n) = beta * (mu * n - oracle::hb(spec.E_b, spec.E_r, n));
    w = (w.array() - w.maxCoeff()).exp();
    w /= w.sum();
    CHECK((gc.populations() - w).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(state_grand_canonical(spec, beta, mu, 8), TruncationTooSmall);
  }
}

TEST_CASE("trace distance") {
  const auto a = state_fock(0, 3), b = state_fock(1, 3);
  CHECK(trace_distance(a.matrix(), b.matrix()) == doctest::Approx(1.0));
  CHECK(trace_distance(a.matrix(), a.matrix()) == doctest::Approx(0.0));
}
