#ifndef DCP_SPECFUN_HPP
#define DCP_SPECFUN_HPP

#include <cstdint>

// Special-function kernel shared by the distribution, fitting and testing
// layers. All functions are pure and thread-safe.

namespace dcp {

// Standard normal CDF Phi(x), evaluated through erfc so that both tails
// retain full relative accuracy (Phi(-40) is ~1e-350 in exact arithmetic
// and must not be computed as 1 - Phi(40)).
double std_normal_cdf(double x);

// Upper tail P(Z > x) = Phi(-x).
double std_normal_sf(double x);

// Survival function of a chi-square with 1 degree of freedom,
// P(chi^2_1 > lambda) = erfc(sqrt(lambda/2)). Throws std::domain_error
// for lambda < 0.
double chi2_1_sf(double lambda);

// General chi-square survival for dof >= 1, via the regularized upper
// incomplete gamma Q(dof/2, x/2).
double chi2_sf(double x, int dof);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// a > 0, x >= 0. Series expansion below the a+1 crossover, modified
// Lentz continued fraction above it.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Riemann zeta on (1, inf). Euler-Maclaurin summation; absolute error
// well below 1e-12 over the whole domain, including s near 1.
// Throws std::domain_error for s <= 1.
double riemann_zeta(double s);

// Tail sum sum_{k>=m} k^{-s} for s > 1, m >= 1 (Hurwitz zeta at an
// integer offset). riemann_zeta(s) == zeta_tail(s, 1).
double zeta_tail(double s, std::int64_t m);

}  // namespace dcp

#endif
