#include "rt/mathx.hpp"

#include <cmath>
#include <stdexcept>

namespace rt {

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_quantile: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -value : value;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double norm_sf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

double erf_inv(double y) {
  if (!(y > -1.0 && y < 1.0)) throw std::domain_error("erf_inv: y must be in (-1,1)");
  if (y == 0.0) return 0.0;
  double z = norm_quantile(0.5 * (y + 1.0)) * M_SQRT1_2;
  // One Newton step; skipped deep in the tail where erf(z)-y underflows.
  if (std::fabs(z) < 6.0) {
    static const double half_sqrt_pi = 0.8862269254527580137;
    z -= (std::erf(z) - y) * half_sqrt_pi * std::exp(z * z);
  }
  return z;
}

double half_normal_cdf(double v, double sigma) {
  if (v <= 0.0) return 0.0;
  if (sigma <= 0.0) return 1.0;  // degenerate at zero
  return std::erf(v / (M_SQRT2 * sigma));
}

double log_choose(int n, int k) {
  if (k < 0 || k > n) throw std::domain_error("log_choose: k out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_upper_tail(int k, int count, double p) {
  if (k < 0 || p < 0.0 || p > 1.0) throw std::domain_error("binom_upper_tail: bad arguments");
  if (count <= 0) return 1.0;
  if (count > k) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  auto tail = [&](int lo, int hi) {
    double s = 0.0;
    for (int i = lo; i <= hi; ++i) s += std::exp(log_choose(k, i) + i * lp + (k - i) * lq);
    return s;
  };
  // Sum the smaller tail to keep the terms well conditioned.
  if (count > k * p) return tail(count, k);
  double lower = tail(0, count - 1);
  return lower >= 1.0 ? 0.0 : 1.0 - lower;
}

std::size_t nearest_rank(std::size_t k, double pct) {
  if (k == 0) throw std::domain_error("nearest_rank: empty sample");
  if (!(pct > 0.0 && pct < 100.0)) throw std::domain_error("nearest_rank: pct must be in (0,100)");
  auto r = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(k) / 100.0));
  if (r < 1) r = 1;
  if (r > k) r = k;
  return r;
}

}  // namespace rt
