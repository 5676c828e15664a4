// Core records shared by every stage: insurer rows, pooled samples with
// state-year partitions, normalized transfer series, and estimate results.
//
// All money is double dollars. Sizes n_i are member months. Types here are
// immutable after construction and safe to share across threads.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rt {

struct StateYear {
  std::string state;
  int year = 0;
  auto operator<=>(const StateYear&) const = default;
};

struct InsurerRecord {
  std::string hios_id;      // 5-digit identifier
  std::string company_name;
  std::string state;        // 2-letter code
  int year = 0;
  std::optional<double> member_months;  // n_i
  std::optional<double> transfer;       // T_i, signed
  std::optional<double> costs;
  std::optional<double> premiums;
  std::optional<double> reinsurance;
  std::optional<bool> nonprofit;

  bool complete() const {
    return member_months && transfer && costs && premiums;
  }
};

// Throws std::invalid_argument when a field invariant is violated.
void validate(const InsurerRecord& rec);

struct MarketSample {
  std::vector<InsurerRecord> records;
  std::map<StateYear, std::vector<std::size_t>> partitions;
  bool normalization_applied = false;
  std::string cost_index_id;

  std::size_t k() const { return records.size(); }
};

// Rebuilds sample.partitions from sample.records. Every record lands in
// exactly one (state, year) bucket.
void rebuild_partitions(MarketSample& sample);

// Sizes and record indices of one partition, in deterministic key order.
struct Partition {
  StateYear key;
  std::vector<double> sizes;
  std::vector<std::size_t> records;
};
std::vector<Partition> partition_view(const MarketSample& sample);

struct NormalizedSeries {
  std::vector<double> values;        // T_i / sqrt(n_i)
  std::vector<std::size_t> source;   // index into the sample's records
};

// T_i / sqrt(n_i); requires member_months > 0 and transfer present.
double normalize_transfer(const InsurerRecord& rec);

NormalizedSeries normalized_series(const MarketSample& sample);

std::vector<double> abs_values(const NormalizedSeries& series);

enum class BetaMethod { half_normal, simulation, percentile, ground_truth };

const char* to_string(BetaMethod m);

struct BetaEstimate {
  double beta = 0.0;  // dollars per sqrt(member month)
  BetaMethod method = BetaMethod::half_normal;
  std::optional<double> dominance_point;   // v at the maximum CDF difference
  std::optional<double> dominance_length;  // the maximum difference itself
  double critical_value = 0.0;
  double outlier_fraction = 0.0;  // P(|Tbar| > 2 beta) in the sample
  double p_value = 1.0;
  std::vector<std::uint64_t> seeds;
};

}  // namespace rt
