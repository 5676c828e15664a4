#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rt/volume.hpp"

using namespace rt;

namespace {
MarketSample two_insurer_sample() {
  MarketSample s;
  for (int i = 0; i < 2; ++i) {
    InsurerRecord r;
    r.hios_id = i == 0 ? "10001" : "10002";
    r.state = "AA";
    r.year = 2017;
    r.member_months = 1.0;
    r.transfer = i == 0 ? 0.7 : -0.7;
    r.costs = 1.0;
    r.premiums = 1.0;
    s.records.push_back(r);
  }
  rebuild_partitions(s);
  s.normalization_applied = true;
  return s;
}
}  // namespace

TEST_CASE("expected absolute transfers closed form") {
  auto s = two_insurer_sample();
  CHECK(volume::expected_abs_transfers(s, 0.0) == 0.0);
  // two insurers of size 1: a_i = 1/2, E = 2 beta / sqrt(pi)
  CHECK(volume::expected_abs_transfers(s, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(volume::expected_abs_transfers(s, 3.0) ==
        doctest::Approx(6.0 / std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("realized absolute transfers") {
  auto s = two_insurer_sample();
  CHECK(volume::realized_abs_transfers(s) == doctest::Approx(1.4));
  for (auto& r : s.records) r.transfer = 0.0;
  CHECK(volume::realized_abs_transfers(s) == 0.0);
}

TEST_CASE("closed form matches the Monte Carlo mean") {
  auto s = two_insurer_sample();
  const double mc = volume::expected_abs_transfers_mc(s, 1.0, 20000, 11);
  CHECK(mc == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(0.02));

  auto market = fixtures::recovery_market(13, 150);
  const double closed = volume::expected_abs_transfers(market.sample, 9000.0);
  const double mc2 = volume::expected_abs_transfers_mc(market.sample, 9000.0, 20000, 12);
  CHECK(mc2 == doctest::Approx(closed).epsilon(0.01));
}

TEST_CASE("volume report ratios") {
  auto s = two_insurer_sample();
  BetaEstimate est;
  est.method = BetaMethod::half_normal;
  // beta chosen so expected == realized
  est.beta = 1.4 * std::sqrt(M_PI) / 2.0;
  auto rep = volume::volume_report(s, est);
  CHECK(rep.f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.non_random_fraction == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.method == volume::VolumeMethod::closed_form);

  est.beta /= 2.0;
  rep = volume::volume_report(s, est);
  CHECK(rep.f == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.non_random_fraction == doctest::Approx(0.5).epsilon(1e-12));

  BetaEstimate zero;
  zero.beta = 0.0;
  CHECK_THROWS_AS(volume::volume_report(s, zero), std::domain_error);
}

TEST_CASE("f is invariant to uniform dollar rescaling") {
  auto market = fixtures::recovery_market(14, 200);
  BetaEstimate est;
  est.beta = 10000.0;
  const auto rep = volume::volume_report(market.sample, est);

  auto scaled = market.sample;
  for (auto& r : scaled.records) r.transfer = *r.transfer * 3.25;
  BetaEstimate est_scaled = est;
  est_scaled.beta = est.beta * 3.25;
  const auto rep_scaled = volume::volume_report(scaled, est_scaled);
  CHECK(rep_scaled.f == doctest::Approx(rep.f).epsilon(1e-12));
}

TEST_CASE("f near one on shock-only data with the true beta") {
  // k = 4000 tightens the realized-volume noise well inside the band
  for (std::uint64_t seed : {21, 22, 23}) {
    auto market = fixtures::recovery_market(seed, 4000);
    BetaEstimate est;
    est.beta = 10000.0;
    const auto rep = volume::volume_report(market.sample, est);
    CHECK(rep.f > 0.95);
    CHECK(rep.f < 1.05);
  }
}
