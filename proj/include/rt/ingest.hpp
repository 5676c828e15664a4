// Report-file ingestion: whitespace-heuristic parsing of summary-report text
// dumps, insurer-report table loading, the outer-join merge into the per-year
// dataset, competitiveness classification, sample selection, and dollar
// normalization.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rt/domain.hpp"

namespace rt::ingest {

// ---- summary-report text ----

struct SummaryRow {
  std::string hios_id;
  std::string company_name;
  std::string state;
  std::optional<double> reinsurance_payment;
  bool reinsurance_not_eligible = false;
  std::optional<double> ra_transfer_individual;
  std::optional<double> ra_transfer_small_group;
  int first_line = 0, last_line = 0;
};

struct ParseReject {
  int first_line = 0, last_line = 0;
  std::string reason;
  std::string text;
};

struct SummaryParse {
  std::vector<SummaryRow> rows;
  std::vector<ParseReject> rejects;
};

// Scans whitespace-separated tokens. A 5-digit token opens a row; the first
// money-shaped token (or NOT ELIGIBLE) ends the name region, the token just
// before it is the state, and up to three payment tokens follow in the order
// reinsurance, individual transfer, small-group transfer. Company names may
// span line breaks. Tokens that fit no row land in the rejects list.
SummaryParse parse_summary_text(std::string_view raw);

// Money token grammar: optional minus or parentheses, comma-grouped digits,
// optional decimals; a bare integer is a name token, not money.
std::optional<double> parse_money_token(std::string_view token);

// ---- insurer-report tables ----

struct MarketColumns {
  std::string member_months, premiums, claims, transfer;
};

// Header names follow the concatenated row+column convention of the source
// workbooks. All names can be remapped.
struct TableSchema {
  std::string hios_id = "HIOS ID";
  std::string company_name = "CompanyName1CompanyInformation";
  std::string state = "CompanyState1CompanyInformation";
  std::string nonprofit = "NonprofitStatus1CompanyInformation";
  MarketColumns small_group{
      "7.4NumberofMemberMonths2HealthInsuranceSMALLGROUPTotal",
      "1.1Directpremiumwritten2HealthInsuranceSMALLGROUPTotal",
      "2.1Incurredclaims2HealthInsuranceSMALLGROUPTotal",
      "1.7Federalriskadjustmentnetpayments2HealthInsuranceSMALLGROUPTotal"};
  MarketColumns individual{
      "7.4NumberofMemberMonths2HealthInsuranceINDIVIDUALTotal",
      "1.1Directpremiumwritten2HealthInsuranceINDIVIDUALTotal",
      "2.1Incurredclaims2HealthInsuranceINDIVIDUALTotal",
      "1.7Federalriskadjustmentnetpayments2HealthInsuranceINDIVIDUALTotal"};
};

struct InsurerTableRow {
  std::string hios_id, company_name, state;
  std::optional<bool> nonprofit;
  struct Fields {
    std::optional<double> member_months, premiums, claims, transfer;
  };
  Fields small_group, individual;
};

struct LoadReport {
  std::vector<InsurerTableRow> rows;
  std::vector<std::string> warnings;
};

// Lenient loader used for dataset building: hios/name/state headers are
// required, per-market columns are picked up when present.
LoadReport load_insurer_rows(const std::filesystem::path& path,
                             const TableSchema& schema = TableSchema{});

enum class Market { small_group, individual };
const char* to_string(Market m);

struct LoadResult {
  std::vector<InsurerRecord> records;
  int incomplete = 0;
  std::vector<std::string> warnings;
};

// Strict loader for one market: a missing required header is a configuration
// error naming the candidates; missing cells become absent fields.
LoadResult load_insurer_table(const std::filesystem::path& path, int year, Market market,
                              const TableSchema& schema = TableSchema{});

// ---- merge ----

struct DatasetRow {
  std::optional<SummaryRow> summary;
  std::optional<InsurerTableRow> insurer;
};

struct MergeDiagnostics {
  int matched = 0, summary_only = 0, insurer_only = 0;
  int duplicate_summary_ids = 0, duplicate_insurer_ids = 0;
  std::vector<std::string> warnings;
};

// Full outer join on hios_id. Duplicate ids within one side are kept and
// paired off in input order, with a warning.
std::vector<DatasetRow> merge_rows(const std::vector<SummaryRow>& summary,
                                   const std::vector<InsurerTableRow>& insurer,
                                   MergeDiagnostics* diag = nullptr);

// Collapses dataset rows into analysis records for one market. Summary
// payment values overwrite insurer-report transfer estimates.
MarketSample to_market_sample(const std::vector<DatasetRow>& rows, int year, Market market);

MarketSample merge(const std::vector<SummaryRow>& summary,
                   const std::vector<InsurerTableRow>& insurer, int year, Market market,
                   MergeDiagnostics* diag = nullptr);

// ---- per-year dataset files (six summary columns first, then the
// concatenated insurer-report columns) ----

void write_dataset_csv(const std::filesystem::path& path, const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> read_dataset_csv(const std::filesystem::path& path);
void write_rejects_csv(const std::filesystem::path& path, const std::vector<ParseReject>& rejects);

// ---- analysis prep ----

// Sum of squared member-month shares within one (state, year) partition.
double compute_hhi(const MarketSample& sample, const std::string& state, int year);

// States whose 2015 HHI is strictly below the unweighted mean across states.
std::set<std::string> classify_competitive(const MarketSample& sample);

struct SelectConfig {
  double min_member_months = 2000.0;  // strict: keep only n > 2000
  std::optional<std::set<std::string>> restrict_states;
};

// Drops records with member_months <= 2000 or any missing core field;
// optionally restricts to the given states. Idempotent.
MarketSample select_sample(const MarketSample& sample, const SelectConfig& config);

struct CostIndex {
  std::string id = "identity";
  bool is_identity = true;
  std::map<StateYear, double> factors;

  static CostIndex identity();
  double at(const std::string& state, int year) const;
};

// File with columns state, year, factor.
CostIndex load_cost_index(const std::filesystem::path& path);

// factor(s, y) = premium per member month pooled over base_year / premium
// per member month in (s, y).
CostIndex derive_cost_index(const MarketSample& sample, int base_year = 2017);

// Multiplies transfer, costs, and premiums by the factor and marks the
// sample normalized. Applying twice is an error.
MarketSample normalize_dollars(const MarketSample& sample, const CostIndex& index);

}  // namespace rt::ingest
