#include "rt/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "rt/csv.hpp"

namespace rt::ingest {

namespace {

bool is_five_digits(std::string_view s) {
  if (s.size() != 5) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize_with_lines(std::string_view raw) {
  std::vector<Token> out;
  int line = 1;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      out.push_back({cur, line});
      cur.clear();
    }
  };
  for (char c : raw) {
    if (c == '\n') {
      flush();
      ++line;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace

std::optional<double> parse_money_token(std::string_view token) {
  std::string_view s = token;
  bool negative = false;
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    negative = true;
    s = s.substr(1, s.size() - 2);
  }
  if (!s.empty() && s.front() == '-') {
    negative = !negative ? true : negative;
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;
  // digits with strict 3-digit comma grouping, optional decimals
  bool has_comma = false, has_dot = false;
  std::string digits;
  std::size_t i = 0;
  std::size_t group = 0;
  bool first_group = true;
  while (i < s.size() && s[i] != '.' ) {
    char c = s[i];
    if (c == ',') {
      if (group == 0 || (first_group ? group > 3 : group != 3)) return std::nullopt;
      has_comma = true;
      first_group = false;
      group = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      ++group;
      digits += c;
    } else {
      return std::nullopt;
    }
    ++i;
  }
  if (group == 0 || (!first_group && group != 3)) return std::nullopt;
  if (i < s.size()) {
    has_dot = true;
    ++i;
    std::size_t frac = 0;
    while (i < s.size()) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      digits += s[i];
      ++frac;
      ++i;
    }
    if (frac == 0) return std::nullopt;
    digits.insert(digits.size() - frac, ".");
  }
  if (!has_comma && !has_dot) return std::nullopt;  // bare integers are name tokens
  double v = 0.0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
  return negative ? -v : v;
}

SummaryParse parse_summary_text(std::string_view raw) {
  SummaryParse out;
  const auto toks = tokenize_with_lines(raw);
  const std::size_t n = toks.size();

  auto is_sentinel_at = [&](std::size_t i) {
    return i + 1 < n && iequals(toks[i].text, "NOT") && iequals(toks[i + 1].text, "ELIGIBLE");
  };
  auto is_payment_at = [&](std::size_t i) {
    return is_sentinel_at(i) || parse_money_token(toks[i].text).has_value();
  };
  auto emit_reject = [&](std::size_t from, std::size_t to, const std::string& reason) {
    ParseReject rej;
    rej.first_line = toks[from].line;
    rej.last_line = toks[to - 1].line;
    rej.reason = reason;
    for (std::size_t i = from; i < to; ++i) {
      if (i > from) rej.text += ' ';
      rej.text += toks[i].text;
    }
    out.rejects.push_back(std::move(rej));
  };

  std::size_t i = 0;
  while (i < n) {
    if (!is_five_digits(toks[i].text) || is_payment_at(i)) {
      // skip ahead to the next plausible row start
      std::size_t j = i + 1;
      while (j < n && (!is_five_digits(toks[j].text) || is_payment_at(j))) ++j;
      emit_reject(i, j, "no hios id");
      i = j;
      continue;
    }
    // find the first payment token; another 5-digit token first means this
    // row carries no payments
    std::size_t m = i + 1;
    while (m < n && !is_payment_at(m) && !is_five_digits(toks[m].text)) ++m;
    if (m >= n || is_five_digits(toks[m].text)) {
      emit_reject(i, m, "no payment token");
      i = m;
      continue;
    }
    if (m - 1 == i) {
      // malformed row: swallow its payment tokens into one reject span
      std::size_t p = m;
      while (p < n && is_payment_at(p)) p += is_sentinel_at(p) ? 2 : 1;
      emit_reject(i, p, "missing state and name");
      i = p;
      continue;
    }
    SummaryRow row;
    row.hios_id = toks[i].text;
    row.state = toks[m - 1].text;
    for (std::size_t t = i + 1; t + 1 < m; ++t) {
      if (!row.company_name.empty()) row.company_name += ' ';
      row.company_name += toks[t].text;
    }
    row.first_line = toks[i].line;
    std::size_t p = m;
    int field = 0;
    while (p < n && field < 3) {
      std::optional<double> value;
      bool sentinel = false;
      if (is_sentinel_at(p)) {
        sentinel = true;
      } else if (auto v = parse_money_token(toks[p].text)) {
        value = v;
      } else {
        break;
      }
      switch (field) {
        case 0:
          row.reinsurance_payment = value;
          row.reinsurance_not_eligible = sentinel;
          break;
        case 1: row.ra_transfer_individual = value; break;
        case 2: row.ra_transfer_small_group = value; break;
      }
      p += sentinel ? 2 : 1;
      ++field;
    }
    row.last_line = toks[p - 1].line;
    out.rows.push_back(std::move(row));
    i = p;
  }
  return out;
}

// ---- insurer tables ----

namespace {

std::optional<double> parse_cell_number(const std::string& cell) {
  if (auto v = csv::parse_double(cell)) return v;
  if (auto v = parse_money_token(cell)) return v;
  return std::nullopt;
}

std::optional<bool> parse_cell_bool(const std::string& cell) {
  if (iequals(cell, "1") || iequals(cell, "TRUE") || iequals(cell, "YES")) return true;
  if (iequals(cell, "0") || iequals(cell, "FALSE") || iequals(cell, "NO")) return false;
  return std::nullopt;
}

std::string header_candidates(const csv::Table& t) {
  std::string s;
  for (const auto& h : t.header) {
    if (!s.empty()) s += ", ";
    s += h;
  }
  return s;
}

int require_column(const csv::Table& t, const std::string& name) {
  int c = t.column(name);
  if (c < 0)
    throw std::runtime_error("missing required header '" + name +
                             "'; file has: " + header_candidates(t));
  return c;
}

std::string cell_at(const std::vector<std::string>& row, int col) {
  if (col < 0 || static_cast<std::size_t>(col) >= row.size()) return {};
  return row[static_cast<std::size_t>(col)];
}

}  // namespace

LoadReport load_insurer_rows(const std::filesystem::path& path, const TableSchema& schema) {
  const auto table = csv::read_file(path);
  LoadReport out;
  const int c_hios = require_column(table, schema.hios_id);
  const int c_name = table.column(schema.company_name);
  const int c_state = table.column(schema.state);
  const int c_np = table.column(schema.nonprofit);
  auto market_cols = [&](const MarketColumns& mc) {
    return std::array<int, 4>{table.column(mc.member_months), table.column(mc.premiums),
                              table.column(mc.claims), table.column(mc.transfer)};
  };
  const auto sg = market_cols(schema.small_group);
  const auto ind = market_cols(schema.individual);
  for (const auto& row : table.rows) {
    InsurerTableRow r;
    r.hios_id = cell_at(row, c_hios);
    r.company_name = cell_at(row, c_name);
    r.state = cell_at(row, c_state);
    r.nonprofit = parse_cell_bool(cell_at(row, c_np));
    auto fill = [&](InsurerTableRow::Fields& f, const std::array<int, 4>& cols) {
      f.member_months = parse_cell_number(cell_at(row, cols[0]));
      f.premiums = parse_cell_number(cell_at(row, cols[1]));
      f.claims = parse_cell_number(cell_at(row, cols[2]));
      f.transfer = parse_cell_number(cell_at(row, cols[3]));
    };
    fill(r.small_group, sg);
    fill(r.individual, ind);
    out.rows.push_back(std::move(r));
  }
  return out;
}

const char* to_string(Market m) {
  return m == Market::small_group ? "small-group" : "individual";
}

LoadResult load_insurer_table(const std::filesystem::path& path, int year, Market market,
                              const TableSchema& schema) {
  const auto table = csv::read_file(path);
  require_column(table, schema.hios_id);
  require_column(table, schema.state);
  const auto& mc = market == Market::small_group ? schema.small_group : schema.individual;
  require_column(table, mc.member_months);
  require_column(table, mc.premiums);
  require_column(table, mc.claims);

  auto loaded = load_insurer_rows(path, schema);
  LoadResult out;
  out.warnings = std::move(loaded.warnings);
  std::unordered_map<std::string, int> seen;
  for (const auto& r : loaded.rows) {
    const auto& f = market == Market::small_group ? r.small_group : r.individual;
    InsurerRecord rec;
    rec.hios_id = r.hios_id;
    rec.company_name = r.company_name;
    rec.state = r.state;
    rec.year = year;
    rec.member_months = f.member_months;
    rec.premiums = f.premiums;
    rec.costs = f.claims;
    rec.transfer = f.transfer;
    rec.nonprofit = r.nonprofit;
    if (!rec.complete()) ++out.incomplete;
    const std::string key = rec.hios_id + "/" + rec.state;
    if (++seen[key] == 2)
      out.warnings.push_back("duplicate hios_id " + rec.hios_id + " in state " + rec.state);
    out.records.push_back(std::move(rec));
  }
  return out;
}

// ---- merge ----

std::vector<DatasetRow> merge_rows(const std::vector<SummaryRow>& summary,
                                   const std::vector<InsurerTableRow>& insurer,
                                   MergeDiagnostics* diag) {
  MergeDiagnostics local;
  MergeDiagnostics& d = diag ? *diag : local;

  std::unordered_map<std::string, std::vector<std::size_t>> by_id;
  for (std::size_t i = 0; i < summary.size(); ++i) by_id[summary[i].hios_id].push_back(i);
  for (const auto& [id, idx] : by_id)
    if (idx.size() > 1) {
      d.duplicate_summary_ids += static_cast<int>(idx.size() - 1);
      d.warnings.push_back("duplicate hios_id in summary report: " + id);
    }
  {
    std::unordered_map<std::string, int> count;
    for (const auto& r : insurer)
      if (++count[r.hios_id] == 2) {
        ++d.duplicate_insurer_ids;
        d.warnings.push_back("duplicate hios_id in insurer report: " + r.hios_id);
      }
  }

  std::vector<DatasetRow> out;
  std::unordered_map<std::string, std::size_t> next_of;
  std::vector<bool> used(summary.size(), false);
  for (const auto& r : insurer) {
    DatasetRow row;
    row.insurer = r;
    auto it = by_id.find(r.hios_id);
    if (it != by_id.end()) {
      auto& cursor = next_of[r.hios_id];
      if (cursor < it->second.size()) {
        const std::size_t si = it->second[cursor++];
        used[si] = true;
        row.summary = summary[si];
        ++d.matched;
      } else {
        ++d.insurer_only;
      }
    } else {
      ++d.insurer_only;
    }
    out.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < summary.size(); ++i) {
    if (used[i]) continue;
    DatasetRow row;
    row.summary = summary[i];
    out.push_back(std::move(row));
    ++d.summary_only;
  }
  return out;
}

MarketSample to_market_sample(const std::vector<DatasetRow>& rows, int year, Market market) {
  MarketSample sample;
  for (const auto& row : rows) {
    InsurerRecord rec;
    rec.year = year;
    if (row.insurer) {
      const auto& f = market == Market::small_group ? row.insurer->small_group
                                                    : row.insurer->individual;
      rec.hios_id = row.insurer->hios_id;
      rec.company_name = row.insurer->company_name;
      rec.state = row.insurer->state;
      rec.member_months = f.member_months;
      rec.premiums = f.premiums;
      rec.costs = f.claims;
      rec.transfer = f.transfer;
      rec.nonprofit = row.insurer->nonprofit;
    }
    if (row.summary) {
      if (!row.summary->hios_id.empty()) rec.hios_id = row.summary->hios_id;
      if (!row.summary->state.empty()) rec.state = row.summary->state;
      if (rec.company_name.empty()) rec.company_name = row.summary->company_name;
      rec.reinsurance = row.summary->reinsurance_payment;
      // final payment values are authoritative
      const auto& t = market == Market::small_group ? row.summary->ra_transfer_small_group
                                                    : row.summary->ra_transfer_individual;
      if (t) rec.transfer = t;
    }
    sample.records.push_back(std::move(rec));
  }
  rebuild_partitions(sample);
  return sample;
}

MarketSample merge(const std::vector<SummaryRow>& summary,
                   const std::vector<InsurerTableRow>& insurer, int year, Market market,
                   MergeDiagnostics* diag) {
  return to_market_sample(merge_rows(summary, insurer, diag), year, market);
}

// ---- dataset files ----

namespace {

const std::vector<std::string>& dataset_header() {
  static const std::vector<std::string> header = {
      "HIOS ID",
      "HIOS INPUTTED INSURANCE COMPANY NAME",
      "STATE",
      "REINSURANCE PAYMENT AMOUNT (OR NOT ELIGIBLE)",
      "HHS RISK ADJUSTMENT TRANSFER AMOUNT (INDIVIDUAL MARKET, INCLUDING CATASTROPHIC)",
      "HHS RISK ADJUSTMENT TRANSFERS AMOUNT (SMALL GROUP MARKET)",
      "CompanyName1CompanyInformation",
      "CompanyState1CompanyInformation",
      "NonprofitStatus1CompanyInformation",
      "7.4NumberofMemberMonths2HealthInsuranceSMALLGROUPTotal",
      "1.1Directpremiumwritten2HealthInsuranceSMALLGROUPTotal",
      "2.1Incurredclaims2HealthInsuranceSMALLGROUPTotal",
      "1.7Federalriskadjustmentnetpayments2HealthInsuranceSMALLGROUPTotal",
      "7.4NumberofMemberMonths2HealthInsuranceINDIVIDUALTotal",
      "1.1Directpremiumwritten2HealthInsuranceINDIVIDUALTotal",
      "2.1Incurredclaims2HealthInsuranceINDIVIDUALTotal",
      "1.7Federalriskadjustmentnetpayments2HealthInsuranceINDIVIDUALTotal",
  };
  return header;
}

std::string money_cell(const std::optional<double>& v) {
  return v ? csv::fmt_money(*v) : std::string{};
}

std::string count_cell(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0f", *v);
  return buf;
}

}  // namespace

void write_dataset_csv(const std::filesystem::path& path, const std::vector<DatasetRow>& rows) {
  csv::Table t;
  t.header = dataset_header();
  for (const auto& row : rows) {
    std::vector<std::string> r(t.header.size());
    if (row.summary) {
      const auto& s = *row.summary;
      r[0] = s.hios_id;
      r[1] = s.company_name;
      r[2] = s.state;
      r[3] = s.reinsurance_not_eligible ? "NOT ELIGIBLE" : money_cell(s.reinsurance_payment);
      r[4] = money_cell(s.ra_transfer_individual);
      r[5] = money_cell(s.ra_transfer_small_group);
    }
    if (row.insurer) {
      const auto& x = *row.insurer;
      if (r[0].empty()) r[0] = x.hios_id;
      r[6] = x.company_name;
      r[7] = x.state;
      if (x.nonprofit) r[8] = *x.nonprofit ? "1" : "0";
      r[9] = count_cell(x.small_group.member_months);
      r[10] = money_cell(x.small_group.premiums);
      r[11] = money_cell(x.small_group.claims);
      r[12] = money_cell(x.small_group.transfer);
      r[13] = count_cell(x.individual.member_months);
      r[14] = money_cell(x.individual.premiums);
      r[15] = money_cell(x.individual.claims);
      r[16] = money_cell(x.individual.transfer);
    }
    t.rows.push_back(std::move(r));
  }
  csv::write_file(path, t);
}

std::vector<DatasetRow> read_dataset_csv(const std::filesystem::path& path) {
  const auto t = csv::read_file(path);
  if (t.header != dataset_header())
    throw std::runtime_error("unexpected dataset header in " + path.string());
  std::vector<DatasetRow> rows;
  for (const auto& r : t.rows) {
    auto cell = [&](std::size_t i) { return i < r.size() ? r[i] : std::string{}; };
    DatasetRow row;
    const bool has_summary = !cell(2).empty() || !cell(3).empty() || !cell(4).empty() ||
                             !cell(5).empty();
    if (has_summary) {
      SummaryRow s;
      s.hios_id = cell(0);
      s.company_name = cell(1);
      s.state = cell(2);
      if (iequals(cell(3), "NOT ELIGIBLE"))
        s.reinsurance_not_eligible = true;
      else
        s.reinsurance_payment = parse_cell_number(cell(3));
      s.ra_transfer_individual = parse_cell_number(cell(4));
      s.ra_transfer_small_group = parse_cell_number(cell(5));
      row.summary = std::move(s);
    }
    const bool has_insurer = !cell(7).empty() || !cell(9).empty() || !cell(13).empty();
    if (has_insurer) {
      InsurerTableRow x;
      x.hios_id = cell(0);
      x.company_name = cell(6);
      x.state = cell(7);
      x.nonprofit = parse_cell_bool(cell(8));
      x.small_group.member_months = parse_cell_number(cell(9));
      x.small_group.premiums = parse_cell_number(cell(10));
      x.small_group.claims = parse_cell_number(cell(11));
      x.small_group.transfer = parse_cell_number(cell(12));
      x.individual.member_months = parse_cell_number(cell(13));
      x.individual.premiums = parse_cell_number(cell(14));
      x.individual.claims = parse_cell_number(cell(15));
      x.individual.transfer = parse_cell_number(cell(16));
      row.insurer = std::move(x);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rejects_csv(const std::filesystem::path& path,
                       const std::vector<ParseReject>& rejects) {
  csv::Table t;
  t.header = {"first_line", "last_line", "reason", "text"};
  for (const auto& rej : rejects)
    t.rows.push_back({std::to_string(rej.first_line), std::to_string(rej.last_line), rej.reason,
                      rej.text});
  csv::write_file(path, t);
}

// ---- analysis prep ----

double compute_hhi(const MarketSample& sample, const std::string& state, int year) {
  auto it = sample.partitions.find(StateYear{state, year});
  if (it == sample.partitions.end() || it->second.empty())
    throw std::domain_error("compute_hhi: no records for " + state + "/" + std::to_string(year));
  double total = 0.0;
  for (std::size_t i : it->second) {
    const auto& mm = sample.records[i].member_months;
    if (mm && *mm > 0) total += *mm;
  }
  if (total <= 0.0)
    throw std::domain_error("compute_hhi: no member months in " + state + "/" +
                            std::to_string(year));
  double hhi = 0.0;
  for (std::size_t i : it->second) {
    const auto& mm = sample.records[i].member_months;
    if (mm && *mm > 0) {
      const double share = *mm / total;
      hhi += share * share;
    }
  }
  return hhi;
}

std::set<std::string> classify_competitive(const MarketSample& sample) {
  std::map<std::string, double> hhi_by_state;
  for (const auto& [key, idx] : sample.partitions) {
    if (key.year != 2015 || idx.empty()) continue;
    try {
      hhi_by_state[key.state] = compute_hhi(sample, key.state, 2015);
    } catch (const std::domain_error&) {
      // partitions without usable member months don't enter the average
    }
  }
  if (hhi_by_state.empty())
    throw std::domain_error("classify_competitive: no 2015 data in sample");
  double mean = 0.0;
  for (const auto& [state, h] : hhi_by_state) mean += h;
  mean /= static_cast<double>(hhi_by_state.size());
  std::set<std::string> out;
  for (const auto& [state, h] : hhi_by_state)
    if (h < mean) out.insert(state);
  return out;
}

MarketSample select_sample(const MarketSample& sample, const SelectConfig& config) {
  MarketSample out;
  out.normalization_applied = sample.normalization_applied;
  out.cost_index_id = sample.cost_index_id;
  for (const auto& rec : sample.records) {
    if (!rec.complete()) continue;
    if (!(*rec.member_months > config.min_member_months)) continue;
    if (config.restrict_states && !config.restrict_states->count(rec.state)) continue;
    out.records.push_back(rec);
  }
  rebuild_partitions(out);
  return out;
}

CostIndex CostIndex::identity() { return CostIndex{}; }

double CostIndex::at(const std::string& state, int year) const {
  if (is_identity) return 1.0;
  auto it = factors.find(StateYear{state, year});
  if (it == factors.end())
    throw std::runtime_error("cost index '" + id + "' has no entry for " + state + "/" +
                             std::to_string(year));
  if (!(it->second > 0.0))
    throw std::runtime_error("cost index factor must be positive for " + state);
  return it->second;
}

CostIndex load_cost_index(const std::filesystem::path& path) {
  const auto t = csv::read_file(path);
  const int c_state = t.column("state");
  const int c_year = t.column("year");
  const int c_factor = t.column("factor");
  if (c_state < 0 || c_year < 0 || c_factor < 0)
    throw std::runtime_error("cost index file needs columns state, year, factor");
  CostIndex idx;
  idx.id = path.filename().string();
  idx.is_identity = false;
  for (const auto& row : t.rows) {
    const auto year = csv::parse_double(row[static_cast<std::size_t>(c_year)]);
    const auto factor = csv::parse_double(row[static_cast<std::size_t>(c_factor)]);
    if (!year || !factor || !(*factor > 0.0))
      throw std::runtime_error("bad cost index row in " + path.string());
    idx.factors[StateYear{row[static_cast<std::size_t>(c_state)],
                          static_cast<int>(*year)}] = *factor;
  }
  return idx;
}

CostIndex derive_cost_index(const MarketSample& sample, int base_year) {
  double base_prem = 0.0, base_mm = 0.0;
  std::map<StateYear, std::pair<double, double>> sums;
  for (const auto& rec : sample.records) {
    if (!rec.premiums || !rec.member_months || !(*rec.member_months > 0)) continue;
    auto& [prem, mm] = sums[StateYear{rec.state, rec.year}];
    prem += *rec.premiums;
    mm += *rec.member_months;
    if (rec.year == base_year) {
      base_prem += *rec.premiums;
      base_mm += *rec.member_months;
    }
  }
  if (base_mm <= 0.0)
    throw std::domain_error("derive_cost_index: no usable records in base year " +
                            std::to_string(base_year));
  const double base_rate = base_prem / base_mm;
  CostIndex idx;
  idx.id = "derived-" + std::to_string(base_year);
  idx.is_identity = false;
  for (const auto& [key, pm] : sums) {
    if (pm.second <= 0.0 || pm.first <= 0.0) continue;
    idx.factors[key] = base_rate / (pm.first / pm.second);
  }
  return idx;
}

MarketSample normalize_dollars(const MarketSample& sample, const CostIndex& index) {
  if (sample.normalization_applied)
    throw std::runtime_error("normalize_dollars: sample is already normalized");
  MarketSample out = sample;
  for (auto& rec : out.records) {
    const double f = index.at(rec.state, rec.year);
    if (rec.transfer) rec.transfer = *rec.transfer * f;
    if (rec.costs) rec.costs = *rec.costs * f;
    if (rec.premiums) rec.premiums = *rec.premiums * f;
  }
  out.normalization_applied = true;
  out.cost_index_id = index.id;
  return out;
}

}  // namespace rt::ingest
