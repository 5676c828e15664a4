#include "rt/domain.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace rt {

namespace {
bool is_five_digits(const std::string& s) {
  if (s.size() != 5) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}
}  // namespace

void validate(const InsurerRecord& rec) {
  if (!rec.hios_id.empty() && !is_five_digits(rec.hios_id))
    throw std::invalid_argument("hios_id must be exactly 5 digits: " + rec.hios_id);
  if (rec.member_months && *rec.member_months < 0)
    throw std::invalid_argument("member_months must be nonnegative");
  if (rec.costs && *rec.costs < 0) throw std::invalid_argument("costs must be nonnegative");
  if (rec.premiums && *rec.premiums < 0)
    throw std::invalid_argument("premiums must be nonnegative");
}

void rebuild_partitions(MarketSample& sample) {
  sample.partitions.clear();
  for (std::size_t i = 0; i < sample.records.size(); ++i) {
    const auto& r = sample.records[i];
    sample.partitions[StateYear{r.state, r.year}].push_back(i);
  }
}

std::vector<Partition> partition_view(const MarketSample& sample) {
  std::vector<Partition> out;
  out.reserve(sample.partitions.size());
  for (const auto& [key, idx] : sample.partitions) {
    Partition p;
    p.key = key;
    p.records = idx;
    p.sizes.reserve(idx.size());
    for (std::size_t i : idx) {
      const auto& mm = sample.records[i].member_months;
      p.sizes.push_back(mm ? *mm : 0.0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

double normalize_transfer(const InsurerRecord& rec) {
  if (!rec.member_months || *rec.member_months <= 0)
    throw std::domain_error("normalize_transfer: record has no positive member_months");
  if (!rec.transfer) throw std::domain_error("normalize_transfer: record has no transfer");
  return *rec.transfer / std::sqrt(*rec.member_months);
}

NormalizedSeries normalized_series(const MarketSample& sample) {
  NormalizedSeries s;
  s.values.reserve(sample.records.size());
  s.source.reserve(sample.records.size());
  for (std::size_t i = 0; i < sample.records.size(); ++i) {
    s.values.push_back(normalize_transfer(sample.records[i]));
    s.source.push_back(i);
  }
  return s;
}

std::vector<double> abs_values(const NormalizedSeries& series) {
  std::vector<double> out(series.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::fabs(series.values[i]);
  return out;
}

const char* to_string(BetaMethod m) {
  switch (m) {
    case BetaMethod::half_normal: return "half-normal";
    case BetaMethod::simulation: return "simulation";
    case BetaMethod::percentile: return "percentile";
    case BetaMethod::ground_truth: return "ground-truth";
  }
  return "?";
}

}  // namespace rt
