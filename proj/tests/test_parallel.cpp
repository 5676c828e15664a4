// The OpenMP kernels must produce exactly the serial reference output for
// equal seeds, independent of thread count.
#include <doctest.h>

#include "fixtures.hpp"
#include "rt/estimate.hpp"
#include "rt/mcsim.hpp"

using namespace rt;

TEST_CASE("batch unit draws: parallel equals serial") {
  std::vector<double> sizes{100, 300, 7000};
  CHECK(mcsim::simulate_batch_unit(sizes, 500, 5) ==
        mcsim::simulate_batch_unit_serial(sizes, 500, 5));
}

TEST_CASE("pooled replicate series: parallel equals serial") {
  auto market = fixtures::recovery_market(2, 60);
  const auto parts = partition_view(market.sample);
  CHECK(mcsim::alg1_pooled_unit(parts, 7, 9) == mcsim::alg1_pooled_unit_serial(parts, 7, 9));
  std::map<StateYear, double> factors;
  for (const auto& p : parts) factors[p.key] = 1.5;
  CHECK(mcsim::alg1_pooled_unit(parts, 3, 9, &factors) ==
        mcsim::alg1_pooled_unit_serial(parts, 3, 9, &factors));
}

TEST_CASE("percentile trials: parallel equals serial") {
  auto market = fixtures::recovery_market(3, 80);
  const auto parts = partition_view(market.sample);
  CHECK(mcsim::percentile_trials_unit(parts, 400, 85.0, 11) ==
        mcsim::percentile_trials_unit_serial(parts, 400, 85.0, 11));
}

TEST_CASE("absolute-sum replicates: parallel equals serial") {
  auto market = fixtures::recovery_market(4, 50);
  const auto parts = partition_view(market.sample);
  CHECK(mcsim::abs_sum_replicates(parts, 1e4, 300, 13) ==
        mcsim::abs_sum_replicates_serial(parts, 1e4, 300, 13));
}

TEST_CASE("outlier simulation counts: parallel equals serial") {
  auto market = fixtures::recovery_market(5, 50);
  const auto parts = partition_view(market.sample);
  CHECK(mcsim::outlier_sim_counts(parts, 1e4, 2e4, 300, 17) ==
        mcsim::outlier_sim_counts_serial(parts, 1e4, 2e4, 300, 17));
}

TEST_CASE("kolmogorov Monte Carlo: parallel equals serial") {
  CHECK(estimate::kolmogorov_critical_mc(0.05, 500, 400, 23) ==
        estimate::kolmogorov_critical_mc_serial(0.05, 500, 400, 23));
}
