// Empirical CDFs, the one-sided dominance test, and the three ways of
// estimating beta: against a half-normal CDF, against pooled simulated
// replicates, and by matching a fixed percentile of simulated markets.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rt/domain.hpp"

namespace rt::estimate {

class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);

  // Right-continuous step function: P(X <= v).
  double operator()(double v) const;
  // Left limit: P(X < v).
  double left(double v) const;

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Reference CDFs for max_difference: need cdf(v) and a left limit.
struct ContinuousRef {
  std::function<double(double)> cdf;
  double operator()(double v) const { return cdf(v); }
  double left(double v) const { return cdf(v); }
};

// ECDF of {scale * u : u in base}, evaluated without materializing the
// scaled values. scale > 0; base values must be nonnegative.
struct ScaledEcdfRef {
  const Ecdf* base = nullptr;
  double scale = 1.0;
  double operator()(double v) const;
  double left(double v) const;
};

// Upper envelope max_j F_j(scale * .) over per-replicate ECDFs.
struct EnvelopeRef {
  const std::vector<Ecdf>* replicates = nullptr;
  double scale = 1.0;
  double operator()(double v) const;
  double left(double v) const;
};

struct MaxDifference {
  double v = 0.0;  // point of maximum difference
  double m = 0.0;  // F_emp - F_ref there
};

// Supremum of F_emp(v) - F_ref(v). The sup is attained at an empirical step
// point evaluated from the right or just left of one, so only those 2k
// candidates are scanned; argmax ties break toward smaller v.
template <typename Ref>
MaxDifference max_difference(const Ecdf& emp, const Ref& ref) {
  const auto& s = emp.sorted();
  const double k = static_cast<double>(s.size());
  MaxDifference best{s.front(), -2.0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double fl = static_cast<double>(i) / k - ref.left(s[i]);
    if (fl > best.m) best = {s[i], fl};
    const double fr = static_cast<double>(i + 1) / k - ref(s[i]);
    if (fr > best.m) best = {s[i], fr};
  }
  return best;
}

MaxDifference max_difference(const Ecdf& emp, const std::function<double(double)>& ref_cdf);

// One-sided Kolmogorov critical value: P(K <= c_alpha) = 1 - alpha,
// asymptotic form sqrt(ln(1/alpha) / 2).
double kolmogorov_critical(double alpha);

// Finite-sample Monte Carlo estimate of the same quantile, from `trials`
// draws of sup_v sqrt(n) (F_n(v) - v) over n sorted uniforms.
double kolmogorov_critical_mc(double alpha, int n, int trials, std::uint64_t seed);
double kolmogorov_critical_mc_serial(double alpha, int n, int trials, std::uint64_t seed);

struct DominanceReport {
  double v_max = 0.0;
  double m_max = 0.0;
  double statistic = 0.0;  // m_max * sqrt(k)
  double critical = 0.0;   // c_alpha
  bool dominated = false;
};

template <typename Ref>
DominanceReport dominance_test(const Ecdf& emp, const Ref& ref, std::size_t k,
                               double alpha = 0.05) {
  if (k != emp.size()) throw std::invalid_argument("dominance_test: k must equal sample size");
  auto md = max_difference(emp, ref);
  DominanceReport rep;
  rep.v_max = md.v;
  rep.m_max = md.m;
  rep.statistic = md.m * std::sqrt(static_cast<double>(k));
  rep.critical = kolmogorov_critical(alpha);
  rep.dominated = rep.statistic > rep.critical;
  return rep;
}

DominanceReport dominance_test(const Ecdf& emp, const std::function<double(double)>& ref_cdf,
                               std::size_t k, double alpha = 0.05);

// Largest beta for which |Tbar| shows no point of dominance against
// |N(0, beta^2)|; bisection on the dominance predicate, which is monotone in
// beta. Relative tolerance 1e-3.
BetaEstimate estimate_beta_halfnormal(const NormalizedSeries& series, double alpha = 0.05);

enum class SimCdfMode { pooled, envelope };

struct SimulationEstOptions {
  int J = 15;
  int runs = 5;
  double alpha = 0.05;
  double rel_tol = 1e-3;
  SimCdfMode mode = SimCdfMode::pooled;
};

// Per run, the reference is the CDF of J simulated replicates at the
// candidate beta; the reported beta is the mean over runs.
BetaEstimate estimate_beta_simulation(const MarketSample& sample,
                                      const SimulationEstOptions& opts, std::uint64_t seed);

struct PercentileEstOptions {
  double percentile = 10.0;
  int trials = 100000;
  double tail = 0.01;
  double rel_tol = 1e-3;
};

// Minimal beta such that at most `tail` of simulated markets put their
// percentile below the empirical one.
BetaEstimate estimate_beta_percentile(const MarketSample& sample,
                                      const PercentileEstOptions& opts, std::uint64_t seed);

}  // namespace rt::estimate
