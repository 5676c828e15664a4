// Synthetic market generation with known ground truth, for estimator
// validation. Transfers follow the shock + linear drift model and are then
// projected onto the per-partition zero-sum hyperplane.
#pragma once

#include <cstdint>
#include <vector>

#include "rt/domain.hpp"

namespace rt::synth {

struct SizeLaw {
  enum class Kind { fixed, uniform_int, log_uniform };
  Kind kind = Kind::fixed;
  double a = 0.0;  // fixed value, or lower bound
  double b = 0.0;  // upper bound

  static SizeLaw fixed(double n) { return {Kind::fixed, n, n}; }
  static SizeLaw uniform(double lo, double hi) { return {Kind::uniform_int, lo, hi}; }
  static SizeLaw log_uniform(double lo, double hi) { return {Kind::log_uniform, lo, hi}; }
};

struct DriftLaw {
  enum class Kind { zero, normal, two_point };
  Kind kind = Kind::zero;
  double sigma = 0.0;  // normal: C_i ~ N(0, sigma^2)
  double value = 0.0;  // two_point: C_i = value with probability prob, else 0
  double prob = 0.0;

  static DriftLaw zero() { return {}; }
  static DriftLaw normal(double sigma) { return {Kind::normal, sigma, 0.0, 0.0}; }
  static DriftLaw two_point(double value, double prob) { return {Kind::two_point, 0.0, value, prob}; }
};

// The shock term is normal by default; the log-normal mode draws per-patient
// transfers from a log-normal with per-patient variance beta_true^2 and lets
// the CLT produce the aggregate.
enum class ShockLaw { normal, lognormal_patient };

struct SynthConfig {
  int k = 0;                   // insurers in total, split across partitions
  int states = 1;              // number of zero-sum partitions
  double beta_true = 0.0;      // b
  SizeLaw size_law;
  DriftLaw drift_law;
  ShockLaw shock_law = ShockLaw::normal;
  std::uint64_t seed = 0;
  int year = 2017;
};

struct GroundTruth {
  double beta_true = 0.0;
  std::vector<double> drift;  // C_i per record
  std::uint64_t seed = 0;
};

struct SynthMarket {
  MarketSample sample;
  GroundTruth truth;
};

SynthMarket generate_market(const SynthConfig& config);

// sigma_c for which expected drift volume sum_i E|C_i| n_i matches expected
// shock volume sum_i E|shock_i| sqrt(n_i): beta * sum sqrt(n) / sum n.
double drift_sigma_for_equal_volume(const std::vector<double>& sizes, double beta_true);

}  // namespace rt::synth
