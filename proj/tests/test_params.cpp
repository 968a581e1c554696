#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trapmode/errors.hpp"
#include "trapmode/params.hpp"

using namespace trapmode;

namespace {
PhysicalParams sample(double beta, double mu, double a = 0.01) {
  PhysicalParams p;
  p.beta = beta;
  p.mu = mu;
  p.a_lambda = a;
  return p;
}
}  // namespace

TEST_CASE("fugacity is the exponential of beta mu") {
  const auto r = derive_reservoir(sample(2.0, -1.0));
  CHECK(r.fugacity == doctest::Approx(0.1353352832366127).epsilon(1e-15));
  CHECK(r.fugacity == std::exp(-2.0));
}

TEST_CASE("density and gamma are linear in the fugacity") {
  const double beta = 3.0;
  const auto r1 = derive_reservoir(sample(beta, -1.0));
  const auto r2 = derive_reservoir(sample(beta, -1.0 + std::log(2.0) / beta));
  CHECK(r2.fugacity / r1.fugacity == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r2.density / r1.density == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r2.gamma / r1.gamma == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("gamma scales with the cross section") {
  const auto r1 = derive_reservoir(sample(5.0, -0.7, 0.01));
  const auto r2 = derive_reservoir(sample(5.0, -0.7, 0.02));
  CHECK(r2.gamma / r1.gamma == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r1.density == doctest::Approx(std::exp(-3.5) * std::pow(20.0 * std::numbers::pi, -1.5)));
}

TEST_CASE("Boltzmann rate per wavenumber") {
  const auto p = sample(4.0, -0.5);
  CHECK(boltzmann_rate_k(p, 0.0) == 0.0);
  CHECK(boltzmann_rate_k(p, 1.4) == doctest::Approx(2.0 * boltzmann_rate_k(p, 0.7)).epsilon(1e-15));
  auto shifted = p;
  shifted.mu += 1.0 / p.beta;
  CHECK(boltzmann_rate_k(shifted, 0.9) / boltzmann_rate_k(p, 0.9) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(boltzmann_rate_k(p, -0.1), InvalidArgument);
}

TEST_CASE("thermal gamma equals the quadrature average of gamma_k") {
  for (double beta : {0.5, 2.0, 11.0, 40.0}) {
    const auto p = sample(beta, -0.6, 0.03);
    const auto r = derive_reservoir(p);
    const double avg = oracle::mb_average_rate(beta, cross_section(p), r.density);
    CHECK(std::abs(avg - r.gamma) / r.gamma < 1e-6);
  }
}

TEST_CASE("outputs are finite and nonnegative over random valid inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> beta(0.05, 60.0), mu(-3.0, 0.5), a(0.0, 0.5);
  for (int i = 0; i < 500; ++i) {
    const auto r = derive_reservoir(sample(beta(rng), mu(rng), a(rng)));
    CHECK(std::isfinite(r.gamma));
    CHECK(r.density > 0.0);
    CHECK(r.gamma >= 0.0);
  }
}

TEST_CASE("parameter validation names the field") {
  auto p = sample(-1.0, -0.5);
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("beta"), InvalidArgument);
  p = sample(1.0, -0.5);
  p.alpha2 = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("alpha2"), InvalidArgument);
  p = sample(1.0, -0.5);
  p.well_radius = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("regime report thresholds") {
  auto r = validate_regime(sample(10.0, -1.0, 0.01), 0.457);
  CHECK(r.beta_Eb == doctest::Approx(4.57));
  CHECK(r.flag("beta_Eb").level == FlagLevel::warn);
  CHECK(r.flag("fugacity").level == FlagLevel::pass);
  CHECK(r.flag("weak_interaction").level == FlagLevel::pass);
  CHECK_FALSE(r.any_fail());

  CHECK(validate_regime(sample(20.0, -1.0), 0.457).flag("beta_Eb").level == FlagLevel::pass);
  r = validate_regime(sample(20.0, 0.0), 0.457);
  CHECK(r.fugacity == 1.0);
  CHECK(r.flag("fugacity").level == FlagLevel::fail);
  CHECK(r.any_fail());
  CHECK(validate_regime(sample(1.0, -0.5), 0.457).flag("beta_Eb").level == FlagLevel::fail);
  CHECK(validate_regime(sample(20.0, -1.0, 0.2), 0.457).flag("weak_interaction").level ==
        FlagLevel::warn);
  CHECK(validate_regime(sample(20.0, -1.0, 0.4), 0.457).flag("weak_interaction").level ==
        FlagLevel::fail);
  CHECK_THROWS_AS(validate_regime(sample(1.0, -1.0), 0.0), InvalidArgument);
}
