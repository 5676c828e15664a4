#include "rt/volume.hpp"

#include <cmath>
#include <stdexcept>

#include "rt/mcsim.hpp"
#include "rt/rng.hpp"

namespace rt::volume {

double expected_abs_transfers(const MarketSample& sample, double beta) {
  if (beta < 0.0) throw std::domain_error("expected_abs_transfers: beta must be >= 0");
  double sum_sqrt_ai = 0.0;
  for (const auto& part : partition_view(sample)) {
    const auto a = mcsim::ai_all(part.sizes);
    for (double ai : a) sum_sqrt_ai += std::sqrt(ai);
  }
  return M_SQRT2 * beta / std::sqrt(M_PI) * sum_sqrt_ai;
}

double realized_abs_transfers(const MarketSample& sample) {
  double sum = 0.0;
  for (const auto& rec : sample.records) {
    if (!rec.transfer) throw std::domain_error("realized_abs_transfers: record without transfer");
    sum += std::fabs(*rec.transfer);
  }
  return sum;
}

double expected_abs_transfers_mc(const MarketSample& sample, double beta, int reps,
                                 std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("expected_abs_transfers_mc: reps must be >= 1");
  const auto parts = partition_view(sample);
  const auto sums = mcsim::abs_sum_replicates(parts, beta, reps, seed);
  double mean = 0.0;
  for (double s : sums) mean += s;
  return mean / reps;
}

VolumeReport volume_report(const MarketSample& sample, const BetaEstimate& beta) {
  VolumeReport rep;
  rep.beta = beta.beta;
  rep.beta_method = beta.method;
  rep.method = beta.method == BetaMethod::percentile ? VolumeMethod::percentile_simulation
                                                     : VolumeMethod::closed_form;
  rep.realized = realized_abs_transfers(sample);
  rep.expected = expected_abs_transfers(sample, beta.beta);
  if (rep.expected <= 0.0) throw std::domain_error("volume_report: expected volume is zero");
  rep.f = rep.realized / rep.expected;
  rep.non_random_fraction = 1.0 - 1.0 / rep.f;
  return rep;
}

}  // namespace rt::volume
