// Outlier-fraction tests with binomial or simulation p-values, the sigma
// exceedance diagnostic, Shapiro-Wilk, and the normal-comparison test.
#pragma once

#include <cstdint>
#include <span>

#include "rt/domain.hpp"

namespace rt::stattests {

// P(|X| > 2 sigma) for X ~ N(0, sigma^2): 1 - erf(sqrt(2)) ~= 0.0455.
double outlier_null_probability();

struct OutlierCount {
  int count = 0;
  double fraction = 0.0;
};

// Counts |Tbar_i| strictly above 2 beta.
OutlierCount outlier_fraction(const NormalizedSeries& series, double beta);

enum class PvalueMode { binomial, simulation };

struct OutlierReport {
  double beta = 0.0;
  double fraction = 0.0;
  int count = 0;
  double p_value = 0.0;  // 0 in simulation mode means "< 1/trials"
  int trials = 0;
  PvalueMode mode = PvalueMode::binomial;
};

// Probability of seeing this many or more transfers above 2 beta under the
// shock-only model. Binomial mode uses the closed-form tail; simulation mode
// counts exceedances over shock-only replicates of the sample's partitions
// and requires trials >= 1000.
OutlierReport outlier_pvalue(const MarketSample& sample, double beta, PvalueMode mode,
                             int trials = 100000, std::uint64_t seed = 0);

struct SigmaExceedance {
  double max_ratio = 0.0;       // max |Tbar_i| / beta
  std::size_t argmax = 0;       // index into the series
  double tail_probability = 0;  // P(|N(0,1)| > max_ratio)
};

SigmaExceedance sigma_exceedance(const NormalizedSeries& series, double beta);

struct ShapiroWilk {
  double w = 0.0;
  double p_value = 0.0;
  const char* method = "";
};

// Shapiro-Wilk W and p-value via the standard coefficient approximation and
// normalizing transformation; 3 <= n <= 5000.
ShapiroWilk shapiro_wilk(std::span<const double> x);

struct NcReport {
  double delta0 = 0.0;  // sqrt(2) erfinv(1 - p/k)
  double beta0 = 0.0;   // max |Tbar_i| / delta0
  int s2 = 0;           // # of |Tbar_i| < 0.1 beta0
  double p01 = 0.0;     // erf(0.1 / sqrt(2))
  double p2 = 0.0;      // P(Binom(k, p01) > s2)
  bool significant_case1 = false;
  bool significant_case2 = false;  // p2 < p/2
};

NcReport nc_test(const NormalizedSeries& series, double p = 0.05);

}  // namespace rt::stattests
