// Transfer-volume accounting: realized vs expected absolute transfers under
// the shock-only model, the ratio f, and the non-random share 1 - 1/f.
#pragma once

#include <cstdint>

#include "rt/domain.hpp"

namespace rt::volume {

// E(sum_i |T'_i|) = sqrt(2) beta / sqrt(pi) * sum_i sqrt(a_i), summed over
// every (state, year) partition. Normalized dollars.
double expected_abs_transfers(const MarketSample& sample, double beta);

// sum_i |T_i|.
double realized_abs_transfers(const MarketSample& sample);

// Monte Carlo mean of sum_i |T'_i| over `reps` replicates; cross-checks the
// closed form.
double expected_abs_transfers_mc(const MarketSample& sample, double beta, int reps,
                                 std::uint64_t seed);

enum class VolumeMethod { closed_form, percentile_simulation };

struct VolumeReport {
  double realized = 0.0;
  double expected = 0.0;
  double f = 0.0;                  // realized / expected
  double non_random_fraction = 0;  // 1 - 1/f
  VolumeMethod method = VolumeMethod::closed_form;
  double beta = 0.0;
  BetaMethod beta_method = BetaMethod::half_normal;
};

VolumeReport volume_report(const MarketSample& sample, const BetaEstimate& beta);

}  // namespace rt::volume
