// Zero-sum transfer simulation: one market draw, replicate batches, and the
// J-replicate series generator used by the estimators and volume accounting.
//
// Construction contract: every kernel draws standard normals at unit scale
// and applies beta by a final multiplication, so a run at c*beta equals the
// beta run scaled by c under a shared seed.
//
// Batch kernels are OpenMP-parallel over replicates with per-replicate
// derived streams; a plain serial implementation of each is kept as the
// reference for testing and benchmarks (suffix _serial). Both produce
// identical output for equal seeds.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rt/domain.hpp"
#include "rt/rng.hpp"

namespace rt::mcsim {

// Variance coefficient of the zero-sum construction: Var(T'_i) = beta^2 a_i.
// a_i = n_i (sum_{j!=i} n_j / sum_j n_j)^2 + (n_i / sum_j n_j)^2 sum_{j!=i} n_j
double compute_ai(std::span<const double> sizes, std::size_t i);
std::vector<double> ai_all(std::span<const double> sizes);

// One zero-sum draw at beta = 1: out_i = c_i - (sum_j c_j) n_i / sum_j n_j
// with c_i = sqrt(n_i) z_i.
void simulate_unit(std::span<const double> sizes, NormalRng& rng, std::span<double> out);

// One market draw of T'_i at the given beta.
std::vector<double> simulate_state(std::span<const double> sizes, double beta,
                                   std::uint64_t seed);

struct SimulationSeries {
  std::vector<double> values;  // Tbar'_i, aligned with sample record order
  double beta = 0.0;
  int iteration = 0;
  std::uint64_t seed = 0;
};

// J replicates of normalized simulated transfers for every partition of the
// sample. The sample must already be in normalized dollars, or `factors`
// must supply the per-(state, year) scale applied to simulated transfers.
std::vector<SimulationSeries> run_algorithm1(
    const MarketSample& sample, double beta, int J, std::uint64_t seed,
    const std::map<StateYear, double>* factors = nullptr);

// --- replicate batch kernels ---

// draws x sizes.size() row-major matrix of unit-beta zero-sum transfers.
std::vector<double> simulate_batch_unit(std::span<const double> sizes, int draws,
                                        std::uint64_t seed);
std::vector<double> simulate_batch_unit_serial(std::span<const double> sizes, int draws,
                                               std::uint64_t seed);

// Pooled signed Tbar' at beta = 1 over J replicates, ordered (j, partition, i).
std::vector<double> alg1_pooled_unit(const std::vector<Partition>& parts, int J,
                                     std::uint64_t seed,
                                     const std::map<StateYear, double>* factors = nullptr);
std::vector<double> alg1_pooled_unit_serial(const std::vector<Partition>& parts, int J,
                                            std::uint64_t seed,
                                            const std::map<StateYear, double>* factors = nullptr);

// Per-trial nearest-rank pct percentile of |Tbar'| at beta = 1.
std::vector<double> percentile_trials_unit(const std::vector<Partition>& parts, int trials,
                                           double pct, std::uint64_t seed);
std::vector<double> percentile_trials_unit_serial(const std::vector<Partition>& parts,
                                                  int trials, double pct, std::uint64_t seed);

// Per-replicate sum of |T'_i| in dollars at the given beta.
std::vector<double> abs_sum_replicates(const std::vector<Partition>& parts, double beta,
                                       int reps, std::uint64_t seed);
std::vector<double> abs_sum_replicates_serial(const std::vector<Partition>& parts, double beta,
                                              int reps, std::uint64_t seed);

// Per-trial count of |Tbar'| strictly above threshold at the given beta.
std::vector<int> outlier_sim_counts(const std::vector<Partition>& parts, double beta,
                                    double threshold, int trials, std::uint64_t seed);
std::vector<int> outlier_sim_counts_serial(const std::vector<Partition>& parts, double beta,
                                           double threshold, int trials, std::uint64_t seed);

}  // namespace rt::mcsim
