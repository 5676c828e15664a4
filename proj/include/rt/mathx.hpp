// Special functions used throughout the analysis: normal quantile (AS241),
// inverse error function, normal CDF tails, and binomial tail probabilities.
#pragma once

#include <cstddef>

namespace rt {

// Quantile of the standard normal distribution, p in (0,1).
// Wichura's algorithm AS241 (PPND16), accurate to ~1e-15 relative.
double norm_quantile(double p);

// P(Z <= x) and P(Z > x) for Z ~ N(0,1), stable in both tails.
double norm_cdf(double x);
double norm_sf(double x);

// Inverse of erf on (-1,1); AS241-based initial value plus one Newton step.
double erf_inv(double y);

// CDF of |N(0, sigma^2)| at v: erf(v / (sqrt(2) sigma)) for v >= 0, else 0.
double half_normal_cdf(double v, double sigma);

double log_choose(int n, int k);

// P(X >= count) for X ~ Binomial(k, p).
double binom_upper_tail(int k, int count, double p);

// 1-based nearest-rank index of the pct-th percentile in a sample of size k.
std::size_t nearest_rank(std::size_t k, double pct);

}  // namespace rt
