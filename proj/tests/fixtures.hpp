// Shared fixtures: the summary-text parser corpus, merge cases, and synthetic
// market helpers used by both the unit tests and the acceptance suite.
#pragma once

#include <string>
#include <vector>

#include "rt/domain.hpp"
#include "rt/ingest.hpp"
#include "rt/synth.hpp"

namespace fixtures {

struct SummaryCase {
  std::string name;
  std::string text;
  std::size_t rows;
  std::size_t rejects;
};

inline const std::vector<SummaryCase>& summary_corpus() {
  static const std::vector<SummaryCase> cases = {
      {"well-formed row",
       "12345 ACME HEALTH PLAN NY 1,234,567.89 -234,567.01 345,678.00\n", 1, 0},
      {"line-broken name with sentinel",
       "54321 TINY CO\nOF OHIO OH NOT ELIGIBLE 0.00 -10.50\n", 1, 0},
      {"empty input", "", 0, 0},
      {"parenthesized negative", "11111 PAREN CO TX (2,345.00) 1.00 2.00\n", 1, 0},
      {"two rows on one line",
       "10001 A CO NY 1.00 2.00 3.00 10002 B CO NJ 4.00 5.00 6.00\n", 2, 0},
      {"row with two payments then next row",
       "10003 TWO PAY CO CA 7.50 -8.25\n10004 NEXT CO WA 1.00 2.00 3.00\n", 2, 0},
      {"header garbage before row",
       "SUMMARY REPORT FOR 2016 BENEFIT YEAR\n22222 REAL CO MN 1.00 2.00 3.00\n", 1, 1},
      {"row with no payment token",
       "33333 NO PAY CO NV\n44444 OK CO OR 1.00 2.00 3.00\n", 1, 1},
      {"malformed hios id", "1234 SHORT ID CO ID 1.00 2.00 3.00\n", 0, 1},
      {"lower-case sentinel", "55555 MIXED CASE CO KY not eligible 10.00 20.00\n", 1, 0},
      {"comma grouping without decimals", "66666 COMMA CO IA 1,000 2,000 -3,000\n", 1, 0},
      {"bare integer inside name", "77777 LOCAL 321 UNION FUND PA 5.00 6.00 7.00\n", 1, 0},
      {"payment straight after id", "88888 9.99 1.00 2.00\n", 0, 1},
      {"trailing junk after row", "99999 TAIL CO UT 1.00 2.00 3.00 EXTRA JUNK\n", 1, 1},
  };
  return cases;
}

inline rt::ingest::SummaryRow summary_row(const std::string& id, const std::string& name,
                                          const std::string& state, double individual,
                                          double small_group) {
  rt::ingest::SummaryRow r;
  r.hios_id = id;
  r.company_name = name;
  r.state = state;
  r.ra_transfer_individual = individual;
  r.ra_transfer_small_group = small_group;
  return r;
}

inline rt::ingest::InsurerTableRow insurer_row(const std::string& id, const std::string& state,
                                               double mm, double premiums, double claims,
                                               double transfer_estimate) {
  rt::ingest::InsurerTableRow r;
  r.hios_id = id;
  r.company_name = "CO " + id;
  r.state = state;
  r.small_group.member_months = mm;
  r.small_group.premiums = premiums;
  r.small_group.claims = claims;
  r.small_group.transfer = transfer_estimate;
  return r;
}

// Shock-only (or drifted) synthetic market, normalized, matching the
// estimator-recovery setup: 4 partitions, n ~ U[2001, 50000].
inline rt::synth::SynthMarket recovery_market(std::uint64_t seed, int k = 1000,
                                              double beta_true = 10000.0,
                                              double drift_sigma = 0.0) {
  rt::synth::SynthConfig cfg;
  cfg.k = k;
  cfg.states = 4;
  cfg.beta_true = beta_true;
  cfg.size_law = rt::synth::SizeLaw::uniform(2001, 50000);
  cfg.drift_law = drift_sigma > 0 ? rt::synth::DriftLaw::normal(drift_sigma)
                                  : rt::synth::DriftLaw::zero();
  cfg.seed = seed;
  auto market = rt::synth::generate_market(cfg);
  market.sample.normalization_applied = true;  // synthetic units are model units
  return market;
}

}  // namespace fixtures
