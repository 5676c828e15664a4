// Times the OpenMP replicate kernels against their serial reference
// implementations on representative workloads.
#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "rt/domain.hpp"
#include "rt/estimate.hpp"
#include "rt/mcsim.hpp"
#include "rt/parallel.hpp"
#include "rt/rng.hpp"
#include "rt/synth.hpp"

using namespace rt;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename F>
double timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return ms_since(t0);
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", worker_threads());

  synth::SynthConfig cfg;
  cfg.k = 1200;
  cfg.states = 4;
  cfg.beta_true = 10000.0;
  cfg.size_law = synth::SizeLaw::uniform(2001, 50000);
  cfg.seed = 7;
  auto market = synth::generate_market(cfg);
  market.sample.normalization_applied = true;
  const auto parts = partition_view(market.sample);

  std::vector<double> sizes{100, 300, 5000, 20000};
  double sink = 0.0;

  {
    std::vector<double> a, b;
    const double s = timed([&] { a = mcsim::simulate_batch_unit_serial(sizes, 200000, 1); });
    const double p = timed([&] { b = mcsim::simulate_batch_unit(sizes, 200000, 1); });
    sink += a.back() + b.back();
    report("simulate_batch_unit", s, p);
  }
  {
    std::vector<double> a, b;
    const double s = timed([&] { a = mcsim::alg1_pooled_unit_serial(parts, 600, 2); });
    const double p = timed([&] { b = mcsim::alg1_pooled_unit(parts, 600, 2); });
    sink += a.back() + b.back();
    report("alg1_pooled_unit", s, p);
  }
  {
    std::vector<double> a, b;
    const double s = timed([&] { a = mcsim::percentile_trials_unit_serial(parts, 2000, 85, 3); });
    const double p = timed([&] { b = mcsim::percentile_trials_unit(parts, 2000, 85, 3); });
    sink += a.back() + b.back();
    report("percentile_trials_unit", s, p);
  }
  {
    std::vector<double> a, b;
    const double s = timed([&] { a = mcsim::abs_sum_replicates_serial(parts, 1e4, 2000, 4); });
    const double p = timed([&] { b = mcsim::abs_sum_replicates(parts, 1e4, 2000, 4); });
    sink += a.back() + b.back();
    report("abs_sum_replicates", s, p);
  }
  {
    double a = 0, b = 0;
    const double s =
        timed([&] { a = estimate::kolmogorov_critical_mc_serial(0.05, 2000, 4000, 5); });
    const double p = timed([&] { b = estimate::kolmogorov_critical_mc(0.05, 2000, 4000, 5); });
    sink += a + b;
    report("kolmogorov_critical_mc", s, p);
  }

  std::printf("(checksum %.6g)\n", sink);
  return 0;
}
