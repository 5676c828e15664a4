#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "rt/domain.hpp"
#include "rt/rng.hpp"

using namespace rt;

namespace {
InsurerRecord rec(double transfer, double mm, const std::string& state = "NY", int year = 2017) {
  InsurerRecord r;
  r.hios_id = "12345";
  r.state = state;
  r.year = year;
  r.member_months = mm;
  r.transfer = transfer;
  r.costs = 1.0;
  r.premiums = 1.0;
  return r;
}
}  // namespace

TEST_CASE("normalize_transfer on known values") {
  CHECK(normalize_transfer(rec(0.0, 10000)) == 0.0);
  CHECK(normalize_transfer(rec(4000.0, 400)) == doctest::Approx(200.0).epsilon(1e-15));
  CHECK(normalize_transfer(rec(-645000.0, 1000000)) == doctest::Approx(-645.0).epsilon(1e-15));
}

TEST_CASE("normalize_transfer rejects zero member months") {
  CHECK_THROWS_AS(normalize_transfer(rec(10.0, 0.0)), std::domain_error);
  InsurerRecord r = rec(10.0, 100.0);
  r.member_months.reset();
  CHECK_THROWS_AS(normalize_transfer(r), std::domain_error);
}

TEST_CASE("normalize then denormalize is the identity") {
  NormalRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double mm = std::exp(rng.uniform() * 12.0) + 1.0;
    const double t = (rng.uniform() - 0.5) * 2e6;
    const double tbar = normalize_transfer(rec(t, mm));
    CHECK(tbar * std::sqrt(mm) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("record validation enforces invariants") {
  CHECK_NOTHROW(validate(rec(1.0, 2.0)));
  InsurerRecord bad_id = rec(1.0, 2.0);
  bad_id.hios_id = "1234";
  CHECK_THROWS_AS(validate(bad_id), std::invalid_argument);
  InsurerRecord neg = rec(1.0, 2.0);
  neg.costs = -5.0;
  CHECK_THROWS_AS(validate(neg), std::invalid_argument);
}

TEST_CASE("partitions cover all records exactly once") {
  MarketSample s;
  s.records = {rec(1, 10, "NY", 2016), rec(2, 20, "NY", 2017), rec(3, 30, "CA", 2017),
               rec(4, 40, "NY", 2016)};
  rebuild_partitions(s);
  std::size_t total = 0;
  std::vector<bool> seen(s.records.size(), false);
  for (const auto& [key, idx] : s.partitions) {
    for (std::size_t i : idx) {
      CHECK(!seen[i]);
      seen[i] = true;
      CHECK(s.records[i].state == key.state);
      CHECK(s.records[i].year == key.year);
    }
    total += idx.size();
  }
  CHECK(total == s.records.size());
  CHECK(s.partitions.size() == 3);
}

TEST_CASE("sorting a normalized series preserves its multiset of values") {
  auto market = fixtures::recovery_market(3, 200);
  auto series = normalized_series(market.sample);
  auto sorted = series.values;
  std::sort(sorted.begin(), sorted.end());
  auto resorted = series.values;
  std::sort(resorted.begin(), resorted.end());
  CHECK(sorted == resorted);
  CHECK(sorted.size() == series.values.size());
  double sum_orig = 0, sum_sorted = 0;
  for (double v : series.values) sum_orig += v;
  for (double v : sorted) sum_sorted += v;
  CHECK(sum_orig == doctest::Approx(sum_sorted).epsilon(1e-12));
}
