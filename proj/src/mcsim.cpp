#include "rt/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rt/mathx.hpp"
#include "rt/parallel.hpp"

namespace rt::mcsim {

namespace {

double total_size(std::span<const double> sizes) {
  double s = 0.0;
  for (double n : sizes) {
    if (n <= 0.0) throw std::domain_error("simulation sizes must be positive");
    s += n;
  }
  return s;
}

// Scale applied to simulated transfers of one partition.
double partition_factor(const Partition& part, const std::map<StateYear, double>* factors) {
  if (!factors) return 1.0;
  auto it = factors->find(part.key);
  if (it == factors->end())
    throw std::runtime_error("no cost-index factor for " + part.key.state + "/" +
                             std::to_string(part.key.year));
  return it->second;
}

std::size_t total_insurers(const std::vector<Partition>& parts) {
  std::size_t k = 0;
  for (const auto& p : parts) k += p.sizes.size();
  return k;
}

// Appends |Tbar'| at beta=1 for every partition into `out` using one rng.
void trial_abs_tbar_unit(const std::vector<Partition>& parts, NormalRng& rng,
                         std::vector<double>& scratch, std::vector<double>& out) {
  out.clear();
  for (const auto& part : parts) {
    scratch.resize(part.sizes.size());
    simulate_unit(part.sizes, rng, scratch);
    for (std::size_t i = 0; i < scratch.size(); ++i)
      out.push_back(std::fabs(scratch[i]) / std::sqrt(part.sizes[i]));
  }
}

}  // namespace

double compute_ai(std::span<const double> sizes, std::size_t i) {
  if (sizes.empty()) throw std::domain_error("compute_ai: empty sizes");
  if (i >= sizes.size()) throw std::domain_error("compute_ai: index out of range");
  const double total = total_size(sizes);
  const double rest = total - sizes[i];
  const double share = sizes[i] / total;
  const double rest_share = rest / total;
  return sizes[i] * rest_share * rest_share + share * share * rest;
}

std::vector<double> ai_all(std::span<const double> sizes) {
  const double total = total_size(sizes);
  std::vector<double> a(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double rest = total - sizes[i];
    const double share = sizes[i] / total;
    const double rest_share = rest / total;
    a[i] = sizes[i] * rest_share * rest_share + share * share * rest;
  }
  return a;
}

void simulate_unit(std::span<const double> sizes, NormalRng& rng, std::span<double> out) {
  const double total = total_size(sizes);
  double sum = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out[i] = std::sqrt(sizes[i]) * rng.normal();
    sum += out[i];
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) out[i] -= sum * (sizes[i] / total);
}

std::vector<double> simulate_state(std::span<const double> sizes, double beta,
                                   std::uint64_t seed) {
  if (beta < 0.0) throw std::domain_error("simulate_state: beta must be >= 0");
  NormalRng rng(seed);
  std::vector<double> t(sizes.size());
  simulate_unit(sizes, rng, t);
  for (double& v : t) v *= beta;
  return t;
}

std::vector<SimulationSeries> run_algorithm1(const MarketSample& sample, double beta, int J,
                                             std::uint64_t seed,
                                             const std::map<StateYear, double>* factors) {
  if (sample.records.empty()) throw std::domain_error("run_algorithm1: empty sample");
  if (J < 1) throw std::domain_error("run_algorithm1: J must be >= 1");
  if (!sample.normalization_applied && !factors)
    throw std::runtime_error(
        "run_algorithm1: sample is not in normalized dollars and no cost index was supplied");
  const auto parts = partition_view(sample);
  std::vector<SimulationSeries> series(static_cast<std::size_t>(J));
  parallel_index_for(static_cast<std::size_t>(J), [&](std::size_t j) {
    SimulationSeries s;
    s.values.assign(sample.records.size(), 0.0);
    s.beta = beta;
    s.iteration = static_cast<int>(j) + 1;
    s.seed = seed;
    std::vector<double> u;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const auto& part = parts[p];
      const double f = partition_factor(part, factors);
      NormalRng rng(mix_seed(seed, stream::kAlg1, j, p));
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        s.values[part.records[i]] = beta * u[i] * f / std::sqrt(part.sizes[i]);
    }
    series[j] = std::move(s);
  });
  return series;
}

std::vector<double> simulate_batch_unit(std::span<const double> sizes, int draws,
                                        std::uint64_t seed) {
  const std::size_t k = sizes.size();
  std::vector<double> out(static_cast<std::size_t>(draws) * k);
  parallel_index_for(static_cast<std::size_t>(draws), [&](std::size_t d) {
    NormalRng rng(mix_seed(seed, stream::kBatch, d));
    simulate_unit(sizes, rng, std::span<double>(out.data() + d * k, k));
  });
  return out;
}

std::vector<double> simulate_batch_unit_serial(std::span<const double> sizes, int draws,
                                               std::uint64_t seed) {
  const std::size_t k = sizes.size();
  std::vector<double> out(static_cast<std::size_t>(draws) * k);
  for (std::size_t d = 0; d < static_cast<std::size_t>(draws); ++d) {
    NormalRng rng(mix_seed(seed, stream::kBatch, d));
    simulate_unit(sizes, rng, std::span<double>(out.data() + d * k, k));
  }
  return out;
}

std::vector<double> alg1_pooled_unit(const std::vector<Partition>& parts, int J,
                                     std::uint64_t seed,
                                     const std::map<StateYear, double>* factors) {
  const std::size_t k = total_insurers(parts);
  std::vector<double> out(static_cast<std::size_t>(J) * k);
  parallel_index_for(static_cast<std::size_t>(J), [&](std::size_t j) {
    std::vector<double> u;
    std::size_t at = j * k;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const auto& part = parts[p];
      const double f = partition_factor(part, factors);
      NormalRng rng(mix_seed(seed, stream::kAlg1, j, p));
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        out[at++] = u[i] * f / std::sqrt(part.sizes[i]);
    }
  });
  return out;
}

std::vector<double> alg1_pooled_unit_serial(const std::vector<Partition>& parts, int J,
                                            std::uint64_t seed,
                                            const std::map<StateYear, double>* factors) {
  const std::size_t k = total_insurers(parts);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(J) * k);
  std::vector<double> u;
  for (std::size_t j = 0; j < static_cast<std::size_t>(J); ++j) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const auto& part = parts[p];
      const double f = partition_factor(part, factors);
      NormalRng rng(mix_seed(seed, stream::kAlg1, j, p));
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        out.push_back(u[i] * f / std::sqrt(part.sizes[i]));
    }
  }
  return out;
}

std::vector<double> percentile_trials_unit(const std::vector<Partition>& parts, int trials,
                                           double pct, std::uint64_t seed) {
  const std::size_t k = total_insurers(parts);
  const std::size_t rank = nearest_rank(k, pct);
  std::vector<double> out(static_cast<std::size_t>(trials));
  parallel_index_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    NormalRng rng(mix_seed(seed, stream::kPercentile, t));
    std::vector<double> scratch, vals;
    vals.reserve(k);
    trial_abs_tbar_unit(parts, rng, scratch, vals);
    std::nth_element(vals.begin(), vals.begin() + (rank - 1), vals.end());
    out[t] = vals[rank - 1];
  });
  return out;
}

std::vector<double> percentile_trials_unit_serial(const std::vector<Partition>& parts,
                                                  int trials, double pct, std::uint64_t seed) {
  const std::size_t k = total_insurers(parts);
  const std::size_t rank = nearest_rank(k, pct);
  std::vector<double> out(static_cast<std::size_t>(trials));
  std::vector<double> scratch, vals;
  for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
    NormalRng rng(mix_seed(seed, stream::kPercentile, t));
    trial_abs_tbar_unit(parts, rng, scratch, vals);
    std::nth_element(vals.begin(), vals.begin() + (rank - 1), vals.end());
    out[t] = vals[rank - 1];
  }
  return out;
}

std::vector<double> abs_sum_replicates(const std::vector<Partition>& parts, double beta,
                                       int reps, std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(reps));
  parallel_index_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    NormalRng rng(mix_seed(seed, stream::kMcVolume, r));
    std::vector<double> u;
    double sum = 0.0;
    for (const auto& part : parts) {
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (double v : u) sum += std::fabs(beta * v);
    }
    out[r] = sum;
  });
  return out;
}

std::vector<double> abs_sum_replicates_serial(const std::vector<Partition>& parts, double beta,
                                              int reps, std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(reps));
  std::vector<double> u;
  for (std::size_t r = 0; r < static_cast<std::size_t>(reps); ++r) {
    NormalRng rng(mix_seed(seed, stream::kMcVolume, r));
    double sum = 0.0;
    for (const auto& part : parts) {
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (double v : u) sum += std::fabs(beta * v);
    }
    out[r] = sum;
  }
  return out;
}

std::vector<int> outlier_sim_counts(const std::vector<Partition>& parts, double beta,
                                    double threshold, int trials, std::uint64_t seed) {
  std::vector<int> out(static_cast<std::size_t>(trials));
  parallel_index_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    NormalRng rng(mix_seed(seed, stream::kOutlierSim, t));
    std::vector<double> u;
    int count = 0;
    for (const auto& part : parts) {
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (std::fabs(beta * u[i]) / std::sqrt(part.sizes[i]) > threshold) ++count;
    }
    out[t] = count;
  });
  return out;
}

std::vector<int> outlier_sim_counts_serial(const std::vector<Partition>& parts, double beta,
                                           double threshold, int trials, std::uint64_t seed) {
  std::vector<int> out(static_cast<std::size_t>(trials));
  std::vector<double> u;
  for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
    NormalRng rng(mix_seed(seed, stream::kOutlierSim, t));
    int count = 0;
    for (const auto& part : parts) {
      u.resize(part.sizes.size());
      simulate_unit(part.sizes, rng, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (std::fabs(beta * u[i]) / std::sqrt(part.sizes[i]) > threshold) ++count;
    }
    out[t] = count;
  }
  return out;
}

}  // namespace rt::mcsim
