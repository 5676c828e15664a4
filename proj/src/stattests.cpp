#include "rt/stattests.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rt/mathx.hpp"
#include "rt/mcsim.hpp"

namespace rt::stattests {

double outlier_null_probability() {
  static const double p = 1.0 - std::erf(M_SQRT2);
  return p;
}

OutlierCount outlier_fraction(const NormalizedSeries& series, double beta) {
  if (beta <= 0.0) throw std::domain_error("outlier_fraction: beta must be positive");
  if (series.values.empty()) throw std::domain_error("outlier_fraction: empty series");
  int count = 0;
  for (double v : series.values)
    if (std::fabs(v) > 2.0 * beta) ++count;
  return {count, static_cast<double>(count) / static_cast<double>(series.values.size())};
}

OutlierReport outlier_pvalue(const MarketSample& sample, double beta, PvalueMode mode,
                             int trials, std::uint64_t seed) {
  const auto series = normalized_series(sample);
  const auto oc = outlier_fraction(series, beta);
  OutlierReport rep;
  rep.beta = beta;
  rep.count = oc.count;
  rep.fraction = oc.fraction;
  rep.mode = mode;
  if (mode == PvalueMode::binomial) {
    rep.trials = 0;
    rep.p_value = binom_upper_tail(static_cast<int>(series.values.size()), oc.count,
                                   outlier_null_probability());
  } else {
    if (trials < 1000)
      throw std::invalid_argument("outlier_pvalue: simulation mode needs trials >= 1000");
    rep.trials = trials;
    const auto parts = partition_view(sample);
    const auto counts = mcsim::outlier_sim_counts(parts, beta, 2.0 * beta, trials, seed);
    int at_least = 0;
    for (int c : counts)
      if (c >= oc.count) ++at_least;
    rep.p_value = static_cast<double>(at_least) / static_cast<double>(trials);
  }
  return rep;
}

SigmaExceedance sigma_exceedance(const NormalizedSeries& series, double beta) {
  if (beta <= 0.0) throw std::domain_error("sigma_exceedance: beta must be positive");
  SigmaExceedance out;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double r = std::fabs(series.values[i]) / beta;
    if (r > out.max_ratio) {
      out.max_ratio = r;
      out.argmax = i;
    }
  }
  out.tail_probability = std::erfc(out.max_ratio * M_SQRT1_2);
  return out;
}

namespace {

// Polynomial in x with coefficients given highest order last.
double poly(const double* c, int n, double x) {
  double r = 0.0;
  for (int i = n - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

ShapiroWilk shapiro_wilk(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n < 3 || n > 5000) throw std::invalid_argument("shapiro_wilk: n must be in [3, 5000]");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  if (s.back() - s.front() <= 0.0)
    throw std::invalid_argument("shapiro_wilk: sample has zero range");

  // Expected normal order statistics (Blom scores) and W coefficients.
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    m[static_cast<std::size_t>(i) - 1] = norm_quantile((i - 0.375) / (n + 0.25));
  double ssq = 0.0;
  for (double v : m) ssq += v * v;

  std::vector<double> a(static_cast<std::size_t>(n));
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
  const double c_n = m[static_cast<std::size_t>(n) - 1] / std::sqrt(ssq);
  static const double g1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static const double g2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  double phi;
  if (n > 5) {
    const double c_n1 = m[static_cast<std::size_t>(n) - 2] / std::sqrt(ssq);
    const double a_n = c_n + poly(g1, 6, rsn);
    const double a_n1 = c_n1 + poly(g2, 6, rsn);
    phi = (ssq - 2.0 * m[static_cast<std::size_t>(n) - 1] * m[static_cast<std::size_t>(n) - 1] -
           2.0 * m[static_cast<std::size_t>(n) - 2] * m[static_cast<std::size_t>(n) - 2]) /
          (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1);
    a[static_cast<std::size_t>(n) - 1] = a_n;
    a[static_cast<std::size_t>(n) - 2] = a_n1;
    a[0] = -a_n;
    a[1] = -a_n1;
    for (int i = 3; i <= n - 2; ++i)
      a[static_cast<std::size_t>(i) - 1] = m[static_cast<std::size_t>(i) - 1] / std::sqrt(phi);
  } else {
    const double a_n = (n == 3) ? M_SQRT1_2 : c_n + poly(g1, 6, rsn);
    phi = (n == 3) ? 1.0
                   : (ssq - 2.0 * m[static_cast<std::size_t>(n) - 1] *
                                m[static_cast<std::size_t>(n) - 1]) /
                         (1.0 - 2.0 * a_n * a_n);
    a[static_cast<std::size_t>(n) - 1] = a_n;
    a[0] = -a_n;
    for (int i = 2; i <= n - 1; ++i)
      a[static_cast<std::size_t>(i) - 1] = m[static_cast<std::size_t>(i) - 1] / std::sqrt(phi);
  }

  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double num = 0.0, sse = 0.0;
  for (int i = 0; i < n; ++i) {
    num += a[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
    const double d = s[static_cast<std::size_t>(i)] - mean;
    sse += d * d;
  }
  double w = num * num / sse;
  if (w > 1.0) w = 1.0;

  // Normalizing transformation for the p-value.
  double p;
  if (n == 3) {
    static const double pi6 = 1.90985931710274;   // 6/pi
    static const double stqr = 1.04719755119660;  // asin(sqrt(3/4))
    p = pi6 * (std::asin(std::sqrt(w)) - stqr);
    p = std::clamp(p, 0.0, 1.0);
  } else if (n <= 11) {
    const double g = -2.273 + 0.459 * n;
    const double lw = std::log(1.0 - w);
    if (lw >= g) {
      p = 1e-99;
    } else {
      const double wt = -std::log(g - lw);
      const double mu = 0.5440 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n * n * n;
      const double sigma = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n - 0.0020322 * n * n * n);
      p = norm_sf((wt - mu) / sigma);
    }
  } else {
    const double u = std::log(static_cast<double>(n));
    const double wt = std::log(1.0 - w);
    const double mu = -1.5861 - 0.31082 * u - 0.083751 * u * u + 0.0038915 * u * u * u;
    const double sigma = std::exp(-0.4803 - 0.082676 * u + 0.0030302 * u * u);
    p = norm_sf((wt - mu) / sigma);
  }
  return {w, p, "royston-as-r94"};
}

NcReport nc_test(const NormalizedSeries& series, double p) {
  const int k = static_cast<int>(series.values.size());
  if (k < 1) throw std::domain_error("nc_test: empty series");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("nc_test: p must be in (0,1)");
  NcReport rep;
  rep.delta0 = M_SQRT2 * erf_inv(1.0 - p / k);
  double vmax = 0.0;
  for (double v : series.values) vmax = std::max(vmax, std::fabs(v));
  rep.beta0 = vmax / rep.delta0;
  const double inner = 0.1 * rep.beta0;
  int s2 = 0, at_cap = 0;
  for (double v : series.values) {
    const double av = std::fabs(v);
    if (av < inner) ++s2;
    if (av >= vmax) ++at_cap;
  }
  rep.s2 = s2;
  rep.p01 = std::erf(0.1 * M_SQRT1_2);
  rep.p2 = binom_upper_tail(k, s2 + 1, rep.p01);
  // Case 1: the largest point sits at delta0 sigmas by construction of
  // beta0, an event of probability p/k per draw under the null.
  rep.significant_case1 = static_cast<double>(at_cap) / k > p / k;
  rep.significant_case2 = rep.p2 < p / 2.0;
  return rep;
}

}  // namespace rt::stattests
