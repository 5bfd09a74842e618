#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dcp/specfun.hpp"
#include "oracles.hpp"

using namespace dcp;

TEST_CASE("standard normal cdf matches high-precision references") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std_normal_cdf(0.5) ==
        doctest::Approx(0.6914624612740131).epsilon(1e-14));
  CHECK(std_normal_cdf(1.0) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(std_normal_cdf(2.0) ==
        doctest::Approx(0.9772498680518208).epsilon(1e-14));
  CHECK(std_normal_cdf(-1.5) ==
        doctest::Approx(0.0668072012688581).epsilon(1e-14));
  CHECK(std_normal_cdf(3.3) ==
        doctest::Approx(0.9995165758576162).epsilon(1e-14));
}

TEST_CASE("standard normal cdf agrees with quadrature of the density") {
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    const double ours = std_normal_cdf(x);
    const double ref = oracle::normal_cdf(x);
    CHECK(std::abs(ours - ref) < 1e-12);
  }
}

TEST_CASE("standard normal symmetry and survival identities") {
  for (double x : {-8.0, -3.2, -1.0, -0.1, 0.0, 0.4, 2.7, 9.0}) {
    CHECK(std_normal_cdf(x) + std_normal_cdf(-x) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std_normal_sf(x) == std_normal_cdf(-x));
  }
  // Far tails keep relative accuracy (no 1 - Phi cancellation); -37 is
  // near the edge of the representable range, ~5e-300.
  CHECK(std_normal_cdf(-37.0) > 0.0);
  CHECK(std_normal_cdf(-37.0) < 1e-290);
  CHECK(std_normal_sf(37.0) == std_normal_cdf(-37.0));
}

TEST_CASE("chi-square(1) survival against references") {
  CHECK(chi2_1_sf(0.0) == 1.0);
  CHECK(chi2_1_sf(0.5) == doctest::Approx(0.4795001221869535).epsilon(1e-14));
  CHECK(chi2_1_sf(2.0) == doctest::Approx(0.1572992070502851).epsilon(1e-14));
  CHECK(chi2_1_sf(3.8415) ==
        doctest::Approx(0.0499987720712223).epsilon(1e-13));
  CHECK(chi2_1_sf(6.29) == doctest::Approx(0.0121421051452018).epsilon(1e-13));
  CHECK(chi2_1_sf(1.03) == doctest::Approx(0.3101586676704260).epsilon(1e-13));
  // Deep tail with relative accuracy preserved.
  CHECK_REL(chi2_1_sf(77.52), 1.313853171678006e-18, 1e-12);
  CHECK_THROWS_AS(chi2_1_sf(-0.1), std::domain_error);
}

TEST_CASE("general chi-square survival") {
  // dof=1 must agree with the dedicated path.
  for (double x : {0.1, 1.0, 3.8415, 20.0})
    CHECK(chi2_sf(x, 1) == doctest::Approx(chi2_1_sf(x)).epsilon(1e-13));
  // dof=2 is exponential: P(chi2_2 > x) = exp(-x/2).
  for (double x : {0.2, 1.7, 9.0})
    CHECK(chi2_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-13));
  CHECK_THROWS_AS(chi2_sf(1.0, 0), std::domain_error);
}

TEST_CASE("regularized incomplete gamma against references") {
  CHECK(gamma_p(0.5, 0.5) ==
        doctest::Approx(0.6826894921370859).epsilon(1e-14));
  CHECK(gamma_p(3.0, 2.5) ==
        doctest::Approx(0.4561868841166705).epsilon(1e-14));
  CHECK(gamma_p(10.0, 10.0) ==
        doctest::Approx(0.5420702855281478).epsilon(1e-14));
  CHECK_REL(gamma_p(2.0, 0.1), 0.0046788401604445, 1e-12);
}

TEST_CASE("incomplete gamma complementarity and recurrence") {
  for (double a : {0.3, 1.0, 2.5, 7.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 11.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) ==
            doctest::Approx(1.0).epsilon(1e-13));
      // P(a+1,x) = P(a,x) - x^a e^-x / Gamma(a+1)
      const double step =
          std::exp(a * std::log(x) - x - log_gamma(a + 1.0));
      CHECK(gamma_p(a + 1.0, x) ==
            doctest::Approx(gamma_p(a, x) - step).epsilon(1e-12));
    }
  }
  CHECK(gamma_p(1.0, 2.0) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("log gamma") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-14));
  CHECK(log_gamma(3.7) == doctest::Approx(1.4280723266653879).epsilon(1e-14));
  CHECK(log_gamma(12.0) == doctest::Approx(17.5023078458738859).epsilon(1e-14));
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma(10.0) ==
        doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("riemann zeta against references") {
  CHECK(riemann_zeta(1.01) ==
        doctest::Approx(100.5779433384968725).epsilon(1e-13));
  CHECK(riemann_zeta(1.1) ==
        doctest::Approx(10.5844484649508098).epsilon(1e-13));
  CHECK(riemann_zeta(1.5) ==
        doctest::Approx(2.6123753486854883).epsilon(1e-13));
  CHECK(riemann_zeta(2.0) ==
        doctest::Approx(1.6449340668482264).epsilon(1e-13));
  CHECK(riemann_zeta(2.5) ==
        doctest::Approx(1.3414872572509172).epsilon(1e-13));
  CHECK(riemann_zeta(3.0) ==
        doctest::Approx(1.2020569031595943).epsilon(1e-13));
  CHECK(riemann_zeta(4.0) ==
        doctest::Approx(1.0823232337111382).epsilon(1e-13));
  CHECK(riemann_zeta(10.0) ==
        doctest::Approx(1.0009945751278181).epsilon(1e-13));
  // pi^2/6 identity.
  CHECK(riemann_zeta(2.0) ==
        doctest::Approx(oracle::kPi * oracle::kPi / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);
  CHECK_THROWS_AS(riemann_zeta(0.5), std::domain_error);
}

TEST_CASE("zeta tail sums") {
  CHECK(zeta_tail(1.5, 1) == riemann_zeta(1.5));
  CHECK(zeta_tail(1.5, 10) ==
        doctest::Approx(0.6486616319415704).epsilon(1e-13));
  CHECK_REL(zeta_tail(2.5, 7), 0.0400817579336607, 1e-12);
  CHECK_REL(zeta_tail(3.0, 101), 4.95024999166750e-5, 1e-11);
  CHECK(zeta_tail(1.2, 64) ==
        doctest::Approx(2.1797876229117407).epsilon(1e-13));
  // Dropping leading terms one by one reproduces the full sum.
  for (double s : {1.05, 1.7, 3.3}) {
    double partial = 0.0;
    for (int k = 1; k < 30; ++k) partial += std::pow(k, -s);
    CHECK(zeta_tail(s, 30) ==
          doctest::Approx(riemann_zeta(s) - partial).epsilon(1e-12));
  }
  CHECK_THROWS_AS(zeta_tail(0.9, 5), std::domain_error);
  CHECK_THROWS_AS(zeta_tail(2.0, 0), std::domain_error);
}
