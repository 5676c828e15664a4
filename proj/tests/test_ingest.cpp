#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "rt/ingest.hpp"

using namespace rt;
using namespace rt::ingest;

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("rtlab_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

MarketSample sample_of(std::vector<InsurerRecord> records) {
  MarketSample s;
  s.records = std::move(records);
  rebuild_partitions(s);
  return s;
}

InsurerRecord rec(const std::string& id, const std::string& state, int year, double mm,
                  double transfer) {
  InsurerRecord r;
  r.hios_id = id;
  r.state = state;
  r.year = year;
  r.member_months = mm;
  r.transfer = transfer;
  r.costs = 100.0;
  r.premiums = 120.0;
  return r;
}

}  // namespace

TEST_CASE("money token grammar") {
  CHECK(*parse_money_token("1,234,567.89") == doctest::Approx(1234567.89));
  CHECK(*parse_money_token("-234,567.01") == doctest::Approx(-234567.01));
  CHECK(*parse_money_token("0.00") == 0.0);
  CHECK(*parse_money_token("(2,345.00)") == doctest::Approx(-2345.0));
  CHECK(*parse_money_token("1,000") == 1000.0);
  CHECK(*parse_money_token("-10.50") == doctest::Approx(-10.5));
  // bare integers and words are name tokens
  CHECK_FALSE(parse_money_token("12345").has_value());
  CHECK_FALSE(parse_money_token("2016").has_value());
  CHECK_FALSE(parse_money_token("ACME").has_value());
  CHECK_FALSE(parse_money_token("1,23").has_value());
  CHECK_FALSE(parse_money_token("12,3456").has_value());
  CHECK_FALSE(parse_money_token("1.").has_value());
  CHECK_FALSE(parse_money_token("").has_value());
}

TEST_CASE("summary parser: documented example rows") {
  auto parsed =
      parse_summary_text("12345 ACME HEALTH PLAN NY 1,234,567.89 -234,567.01 345,678.00");
  REQUIRE(parsed.rows.size() == 1);
  REQUIRE(parsed.rejects.empty());
  const auto& r = parsed.rows[0];
  CHECK(r.hios_id == "12345");
  CHECK(r.company_name == "ACME HEALTH PLAN");
  CHECK(r.state == "NY");
  CHECK(*r.reinsurance_payment == doctest::Approx(1234567.89));
  CHECK(*r.ra_transfer_individual == doctest::Approx(-234567.01));
  CHECK(*r.ra_transfer_small_group == doctest::Approx(345678.0));

  parsed = parse_summary_text("54321 TINY CO\nOF OHIO OH NOT ELIGIBLE 0.00 -10.50");
  REQUIRE(parsed.rows.size() == 1);
  const auto& t = parsed.rows[0];
  CHECK(t.company_name == "TINY CO OF OHIO");
  CHECK(t.state == "OH");
  CHECK_FALSE(t.reinsurance_payment.has_value());
  CHECK(t.reinsurance_not_eligible);
  CHECK(*t.ra_transfer_individual == 0.0);
  CHECK(*t.ra_transfer_small_group == doctest::Approx(-10.5));
  CHECK(t.first_line == 1);
  CHECK(t.last_line == 2);

  parsed = parse_summary_text("");
  CHECK(parsed.rows.empty());
  CHECK(parsed.rejects.empty());
}

TEST_CASE("summary parser corpus") {
  for (const auto& c : fixtures::summary_corpus()) {
    CAPTURE(c.name);
    auto parsed = parse_summary_text(c.text);
    CHECK(parsed.rows.size() == c.rows);
    CHECK(parsed.rejects.size() == c.rejects);
  }
}

TEST_CASE("summary parser corpus details") {
  auto two = parse_summary_text("10001 A CO NY 1.00 2.00 3.00 10002 B CO NJ 4.00 5.00 6.00");
  REQUIRE(two.rows.size() == 2);
  CHECK(two.rows[1].hios_id == "10002");
  CHECK(two.rows[1].state == "NJ");
  CHECK(*two.rows[1].ra_transfer_small_group == 6.0);

  auto partial =
      parse_summary_text("10003 TWO PAY CO CA 7.50 -8.25\n10004 NEXT CO WA 1.00 2.00 3.00");
  REQUIRE(partial.rows.size() == 2);
  CHECK(*partial.rows[0].reinsurance_payment == doctest::Approx(7.5));
  CHECK(*partial.rows[0].ra_transfer_individual == doctest::Approx(-8.25));
  CHECK_FALSE(partial.rows[0].ra_transfer_small_group.has_value());

  auto nopay = parse_summary_text("33333 NO PAY CO NV\n44444 OK CO OR 1.00 2.00 3.00");
  REQUIRE(nopay.rejects.size() == 1);
  CHECK(nopay.rejects[0].reason == "no payment token");
  CHECK(nopay.rejects[0].first_line == 1);

  auto digits = parse_summary_text("77777 LOCAL 321 UNION FUND PA 5.00 6.00 7.00");
  REQUIRE(digits.rows.size() == 1);
  CHECK(digits.rows[0].company_name == "LOCAL 321 UNION FUND");
}

TEST_CASE("summary parser is deterministic and total over lines") {
  for (const auto& c : fixtures::summary_corpus()) {
    auto a = parse_summary_text(c.text);
    auto b = parse_summary_text(c.text);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].hios_id == b.rows[i].hios_id);
      CHECK(a.rows[i].company_name == b.rows[i].company_name);
    }
    // every nonempty line is covered by some row or reject span
    int lines = 0;
    for (char ch : c.text)
      if (ch == '\n') ++lines;
    if (!c.text.empty() && c.text.back() != '\n') ++lines;
    for (int line = 1; line <= lines; ++line) {
      bool blank = true;
      int at = 1;
      for (std::size_t i = 0; i < c.text.size() && at <= line; ++i) {
        if (at == line && !std::isspace(static_cast<unsigned char>(c.text[i]))) blank = false;
        if (c.text[i] == '\n') ++at;
      }
      if (blank) continue;
      bool covered = false;
      for (const auto& r : a.rows) covered |= r.first_line <= line && line <= r.last_line;
      for (const auto& r : a.rejects) covered |= r.first_line <= line && line <= r.last_line;
      CHECK(covered);
    }
  }
}

TEST_CASE("merge cases") {
  // 3 summary rows, 2 insurer rows, 2 shared ids
  std::vector<SummaryRow> s = {fixtures::summary_row("10001", "A", "NY", 1, 2),
                               fixtures::summary_row("10002", "B", "NJ", 3, 4),
                               fixtures::summary_row("10003", "C", "CT", 5, 6)};
  std::vector<InsurerTableRow> i = {fixtures::insurer_row("10001", "NY", 5000, 10, 8, 99),
                                    fixtures::insurer_row("10002", "NJ", 7000, 12, 9, 98)};
  MergeDiagnostics d;
  auto rows = merge_rows(s, i, &d);
  CHECK(rows.size() == 3);
  CHECK(d.matched == 2);
  CHECK(d.summary_only == 1);
  CHECK(d.insurer_only == 0);

  // disjoint 2 + 2
  std::vector<SummaryRow> s2 = {fixtures::summary_row("20001", "A", "NY", 1, 2),
                                fixtures::summary_row("20002", "B", "NJ", 3, 4)};
  std::vector<InsurerTableRow> i2 = {fixtures::insurer_row("30001", "CA", 1, 2, 3, 4),
                                     fixtures::insurer_row("30002", "WA", 5, 6, 7, 8)};
  MergeDiagnostics d2;
  CHECK(merge_rows(s2, i2, &d2).size() == 4);
  CHECK(d2.matched == 0);

  // identical singletons
  MergeDiagnostics d3;
  auto one = merge_rows({fixtures::summary_row("40001", "A", "NY", 1, 2)},
                        {fixtures::insurer_row("40001", "NY", 100, 5, 4, 3)}, &d3);
  CHECK(one.size() == 1);
  CHECK(d3.matched == 1);
  CHECK(one[0].summary.has_value());
  CHECK(one[0].insurer.has_value());

  // duplicate insurer id pairs off in order, leftover unmatched
  MergeDiagnostics d4;
  auto dup = merge_rows({fixtures::summary_row("50001", "A", "NY", 1, 2)},
                        {fixtures::insurer_row("50001", "NY", 1, 1, 1, 1),
                         fixtures::insurer_row("50001", "NY", 2, 2, 2, 2)},
                        &d4);
  CHECK(dup.size() == 2);
  CHECK(d4.matched == 1);
  CHECK(d4.insurer_only == 1);
  CHECK(d4.duplicate_insurer_ids == 1);
  CHECK_FALSE(d4.warnings.empty());

  // summary transfers overwrite insurer estimates
  auto sample = merge({fixtures::summary_row("60001", "A", "NY", 77.0, -222.0)},
                      {fixtures::insurer_row("60001", "NY", 100, 5, 4, 111.0)}, 2016,
                      Market::small_group);
  REQUIRE(sample.records.size() == 1);
  CHECK(*sample.records[0].transfer == doctest::Approx(-222.0));
  CHECK(sample.records[0].year == 2016);
  auto ind = merge({fixtures::summary_row("60001", "A", "NY", 77.0, -222.0)},
                   {fixtures::insurer_row("60001", "NY", 100, 5, 4, 111.0)}, 2016,
                   Market::individual);
  CHECK(*ind.records[0].transfer == doctest::Approx(77.0));
}

TEST_CASE("hhi on known shares") {
  auto s = sample_of({rec("10001", "NY", 2015, 100, 0)});
  CHECK(compute_hhi(s, "NY", 2015) == doctest::Approx(1.0));
  auto two = sample_of({rec("10001", "NY", 2015, 100, 0), rec("10002", "NY", 2015, 100, 0)});
  CHECK(compute_hhi(two, "NY", 2015) == doctest::Approx(0.5));
  auto three = sample_of({rec("10001", "NY", 2015, 500, 0), rec("10002", "NY", 2015, 300, 0),
                          rec("10003", "NY", 2015, 200, 0)});
  CHECK(compute_hhi(three, "NY", 2015) == doctest::Approx(0.38));
  CHECK_THROWS_AS(compute_hhi(three, "CA", 2015), std::domain_error);
}

TEST_CASE("hhi decreases under a mean-preserving split") {
  auto base = sample_of({rec("10001", "NY", 2015, 600, 0), rec("10002", "NY", 2015, 400, 0)});
  auto split = sample_of({rec("10001", "NY", 2015, 300, 0), rec("10003", "NY", 2015, 300, 0),
                          rec("10002", "NY", 2015, 400, 0)});
  CHECK(compute_hhi(split, "NY", 2015) < compute_hhi(base, "NY", 2015));
}

TEST_CASE("competitive classification") {
  auto s = sample_of({rec("10001", "AA", 2015, 100, 0), rec("10002", "AA", 2015, 100, 0),
                      rec("10003", "AA", 2015, 100, 0), rec("10004", "AA", 2015, 100, 0),
                      rec("10005", "AA", 2015, 100, 0), rec("20001", "BB", 2015, 500, 0),
                      rec("20002", "BB", 2015, 100, 0)});
  auto comp = classify_competitive(s);
  CHECK(comp == std::set<std::string>{"AA"});  // HHI 0.2 vs ~0.72

  auto equal = sample_of({rec("10001", "AA", 2015, 100, 0), rec("10002", "AA", 2015, 100, 0),
                          rec("20001", "BB", 2015, 100, 0), rec("20002", "BB", 2015, 100, 0)});
  CHECK(classify_competitive(equal).empty());  // strictly-below fails at ties

  auto no2015 = sample_of({rec("10001", "AA", 2016, 100, 0)});
  CHECK_THROWS_AS(classify_competitive(no2015), std::domain_error);
}

TEST_CASE("sample selection") {
  auto boundary_low = rec("10001", "NY", 2016, 2000, 5);
  auto boundary_hi = rec("10002", "NY", 2016, 2001, 5);
  auto missing = rec("10003", "NY", 2016, 9000, 5);
  missing.premiums.reset();
  auto other_state = rec("10004", "CA", 2016, 9000, 5);
  auto s = sample_of({boundary_low, boundary_hi, missing, other_state});

  auto picked = select_sample(s, SelectConfig{});
  REQUIRE(picked.records.size() == 2);
  CHECK(picked.records[0].hios_id == "10002");
  CHECK(picked.records[1].hios_id == "10004");

  SelectConfig restricted;
  restricted.restrict_states = std::set<std::string>{"NY"};
  auto ny = select_sample(s, restricted);
  REQUIRE(ny.records.size() == 1);
  CHECK(ny.records[0].hios_id == "10002");

  // idempotent and a subset of the input
  auto twice = select_sample(picked, SelectConfig{});
  CHECK(twice.records.size() == picked.records.size());

  auto empty = select_sample(sample_of({boundary_low}), SelectConfig{});
  CHECK(empty.records.empty());
}

TEST_CASE("dollar normalization") {
  auto s = sample_of({rec("10001", "NY", 2016, 3000, 100.0)});
  auto same = normalize_dollars(s, CostIndex::identity());
  CHECK(*same.records[0].transfer == 100.0);
  CHECK(same.normalization_applied);
  CHECK_THROWS_AS(normalize_dollars(same, CostIndex::identity()), std::runtime_error);

  CostIndex idx;
  idx.id = "x2";
  idx.is_identity = false;
  idx.factors[{"NY", 2016}] = 2.0;
  auto doubled = normalize_dollars(s, idx);
  CHECK(*doubled.records[0].transfer == 200.0);
  CHECK(*doubled.records[0].costs == 200.0);
  CHECK(*doubled.records[0].premiums == 240.0);
  CHECK(doubled.cost_index_id == "x2");

  auto other = sample_of({rec("10001", "CA", 2016, 3000, 100.0)});
  CHECK_THROWS_AS(normalize_dollars(other, idx), std::runtime_error);
}

TEST_CASE("derived cost index scales premiums per member month to the base year") {
  // base year pooled rate: (120 + 240) / (100 + 100) = 1.8
  auto a = rec("10001", "NY", 2017, 100, 0);
  a.premiums = 120.0;
  auto b = rec("10002", "CA", 2017, 100, 0);
  b.premiums = 240.0;
  auto c = rec("10003", "CA", 2016, 100, 0);
  c.premiums = 90.0;
  auto idx = derive_cost_index(sample_of({a, b, c}), 2017);
  CHECK(idx.at("NY", 2017) == doctest::Approx(1.8 / 1.2));
  CHECK(idx.at("CA", 2017) == doctest::Approx(1.8 / 2.4));
  CHECK(idx.at("CA", 2016) == doctest::Approx(1.8 / 0.9));
  CHECK_THROWS_AS(idx.at("TX", 2017), std::runtime_error);
}

TEST_CASE("cost index file loading") {
  const auto path = temp_file("index.csv", "state,year,factor\nNY,2016,1.25\nCA,2016,0.8\n");
  auto idx = load_cost_index(path);
  CHECK_FALSE(idx.is_identity);
  CHECK(idx.at("NY", 2016) == doctest::Approx(1.25));
  CHECK(idx.at("CA", 2016) == doctest::Approx(0.8));
  CHECK_THROWS_AS(idx.at("NY", 2017), std::runtime_error);

  const auto bad = temp_file("index_bad.csv", "state,year,factor\nNY,2016,-1\n");
  CHECK_THROWS_AS(load_cost_index(bad), std::runtime_error);
  const auto cols = temp_file("index_cols.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(load_cost_index(cols), std::runtime_error);
}

TEST_CASE("insurer table loading") {
  const std::string header =
      "HIOS ID,CompanyName1CompanyInformation,CompanyState1CompanyInformation,"
      "NonprofitStatus1CompanyInformation,"
      "7.4NumberofMemberMonths2HealthInsuranceSMALLGROUPTotal,"
      "1.1Directpremiumwritten2HealthInsuranceSMALLGROUPTotal,"
      "2.1Incurredclaims2HealthInsuranceSMALLGROUPTotal,"
      "1.7Federalriskadjustmentnetpayments2HealthInsuranceSMALLGROUPTotal\n";
  const auto path = temp_file(
      "insurer.csv", header +
                         "10001,\"ACME, INC\",NY,1,5000,100000.00,80000.00,-500.00\n"
                         "10002,BETA CO,NJ,0,,120000.00,90000.00,600.00\n"
                         "10003,GAMMA CO,CT,,7000,130000.00,95000.00,700.00\n");
  auto res = load_insurer_table(path, 2016, Market::small_group);
  REQUIRE(res.records.size() == 3);
  CHECK(res.incomplete == 1);  // missing member months on the second row
  CHECK(res.records[0].company_name == "ACME, INC");
  CHECK(*res.records[0].member_months == 5000);
  CHECK(*res.records[0].transfer == doctest::Approx(-500.0));
  CHECK(*res.records[0].nonprofit == true);
  CHECK_FALSE(res.records[1].member_months.has_value());
  CHECK_FALSE(res.records[2].nonprofit.has_value());

  const auto empty = temp_file("insurer_empty.csv", header);
  CHECK(load_insurer_table(empty, 2016, Market::small_group).records.empty());

  const auto dup = temp_file(
      "insurer_dup.csv", header +
                             "10001,A,NY,1,5000,1.00,1.00,1.00\n"
                             "10001,A RESTATED,NY,1,5100,1.00,1.00,1.00\n");
  auto dup_res = load_insurer_table(dup, 2016, Market::small_group);
  CHECK(dup_res.records.size() == 2);
  REQUIRE(dup_res.warnings.size() == 1);

  const auto bad = temp_file("insurer_bad.csv", "HIOS ID,SomethingElse\n10001,1\n");
  CHECK_THROWS_WITH_AS(load_insurer_table(bad, 2016, Market::small_group),
                       doctest::Contains("missing required header"), std::runtime_error);
}

TEST_CASE("dataset files round-trip") {
  std::vector<SummaryRow> s = {fixtures::summary_row("10001", "A CO", "NY", 10.5, -20.25)};
  s[0].reinsurance_not_eligible = true;
  std::vector<InsurerTableRow> i = {fixtures::insurer_row("10001", "NY", 5000, 1000, 800, -19),
                                    fixtures::insurer_row("10002", "NJ", 6000, 1100, 900, 21)};
  auto rows = merge_rows(s, i);
  const auto path = fs::temp_directory_path() / "rtlab_test_dataset.csv";
  write_dataset_csv(path, rows);
  auto back = read_dataset_csv(path);
  REQUIRE(back.size() == rows.size());
  CHECK(back[0].summary->hios_id == "10001");
  CHECK(back[0].summary->reinsurance_not_eligible);
  CHECK(*back[0].summary->ra_transfer_small_group == doctest::Approx(-20.25));
  CHECK(*back[0].insurer->small_group.member_months == 5000);
  CHECK_FALSE(back[1].summary.has_value());
  CHECK(back[1].insurer->state == "NJ");

  // byte-identical rewrite
  const auto again = fs::temp_directory_path() / "rtlab_test_dataset2.csv";
  write_dataset_csv(again, back);
  std::ifstream f1(path, std::ios::binary), f2(again, std::ios::binary);
  std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(c1 == c2);
}
