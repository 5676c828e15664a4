#include "rt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "rt/csv.hpp"
#include "rt/domain.hpp"
#include "rt/estimate.hpp"
#include "rt/ingest.hpp"
#include "rt/mathx.hpp"
#include "rt/mcsim.hpp"
#include "rt/rng.hpp"
#include "rt/stattests.hpp"
#include "rt/synth.hpp"
#include "rt/volume.hpp"

namespace rt::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "rtlab 1.0.0";

// Sub-stream tags for one analyze run.
constexpr std::uint64_t kSeedSimulationEst = 101;
constexpr std::uint64_t kSeedPercentileEst = 102;
constexpr std::uint64_t kSeedOutlierSim = 103;
constexpr std::uint64_t kSeedSeriesDump = 104;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "2017=path" or a path whose name contains a 4-digit year.
std::pair<int, std::string> split_year_input(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq != std::string::npos && eq == 4) {
    const std::string y = spec.substr(0, eq);
    if (std::all_of(y.begin(), y.end(), [](char c) { return std::isdigit(c); }))
      return {std::stoi(y), spec.substr(eq + 1)};
  }
  const std::string name = fs::path(spec).filename().string();
  for (std::size_t i = 0; i + 4 <= name.size(); ++i) {
    if (std::isdigit(name[i]) && std::isdigit(name[i + 1]) && std::isdigit(name[i + 2]) &&
        std::isdigit(name[i + 3]) && (i + 4 == name.size() || !std::isdigit(name[i + 4])) &&
        (i == 0 || !std::isdigit(name[i - 1]))) {
      const int y = std::stoi(name.substr(i, 4));
      if (y >= 1990 && y <= 2100) return {y, spec};
    }
  }
  throw CLI::ValidationError("--input", "cannot determine benefit year for '" + spec +
                                            "'; use YYYY=path");
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool is_state_code(const std::string& s) {
  return s.size() == 2 && std::isalpha(static_cast<unsigned char>(s[0])) &&
         std::isalpha(static_cast<unsigned char>(s[1]));
}

// Named state groups; "NY+CA+WI"-style unions of codes are accepted too.
std::optional<std::set<std::string>> resolve_group(const std::string& name,
                                                   const MarketSample& full,
                                                   std::uint64_t seed, json& meta) {
  const std::string g = upper(name);
  if (g == "ALL") return std::nullopt;
  if (g == "COMPETITIVE") {
    auto states = ingest::classify_competitive(full);
    meta["competitive_states"] = states;
    return states;
  }
  if (g == "RANDOM-A" || g == "RANDOM-B") {
    std::set<std::string> all;
    for (const auto& [key, idx] : full.partitions)
      if (!key.state.empty()) all.insert(key.state);
    std::vector<std::string> order(all.begin(), all.end());
    NormalRng rng(mix_seed(seed, stream::kStateSplit));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(i) - 1))]);
    const std::size_t half = order.size() / 2;
    std::set<std::string> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
    std::set<std::string> b(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
    meta["random_split"] = {{"A", a}, {"B", b}, {"seed", seed}};
    return g == "RANDOM-A" ? a : b;
  }
  std::set<std::string> states;
  std::size_t at = 0;
  while (at <= g.size()) {
    auto plus = g.find('+', at);
    const std::string code = g.substr(at, plus == std::string::npos ? plus : plus - at);
    if (!is_state_code(code))
      throw CLI::ValidationError("--group", "unknown state group '" + name + "'");
    states.insert(code);
    if (plus == std::string::npos) break;
    at = plus + 1;
  }
  return states;
}

void recenter_transfers(MarketSample& sample) {
  for (const auto& [key, idx] : sample.partitions) {
    double total = 0.0, size_total = 0.0;
    for (std::size_t i : idx) {
      const auto& r = sample.records[i];
      if (!r.transfer || !r.member_months) continue;
      total += *r.transfer;
      size_total += *r.member_months;
    }
    if (size_total <= 0.0) continue;
    for (std::size_t i : idx) {
      auto& r = sample.records[i];
      if (r.transfer && r.member_months)
        r.transfer = *r.transfer - total * (*r.member_months / size_total);
    }
  }
}

std::string seeds_cell(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (auto v : seeds) {
    if (!s.empty()) s += ';';
    s += std::to_string(v);
  }
  return s;
}

std::string pvalue_cell(double p, int trials) {
  if (trials > 0 && p <= 0.0) return "<" + csv::fmt_double(1.0 / trials);
  return csv::fmt_double(p);
}

// ---------------- build-dataset ----------------

struct BuildConfig {
  std::vector<std::string> summary_inputs;
  std::vector<std::string> insurer_inputs;
  std::string out_dir;
};

int cmd_build_dataset(const BuildConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::map<int, std::string> summary_by_year, insurer_by_year;
  for (const auto& s : cfg.summary_inputs) {
    auto [y, p] = split_year_input(s);
    summary_by_year[y] = p;
  }
  for (const auto& s : cfg.insurer_inputs) {
    auto [y, p] = split_year_input(s);
    insurer_by_year[y] = p;
  }
  std::set<int> years;
  for (const auto& [y, p] : summary_by_year) years.insert(y);
  for (const auto& [y, p] : insurer_by_year) years.insert(y);
  if (years.empty()) throw CLI::ValidationError("--summary", "no inputs given");

  json meta;
  meta["tool"] = kToolVersion;
  meta["command"] = "build-dataset";
  for (int year : years) {
    ingest::SummaryParse parsed;
    if (auto it = summary_by_year.find(year); it != summary_by_year.end()) {
      std::ifstream in(it->second);
      if (!in) throw DataError("cannot open " + it->second);
      std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      parsed = ingest::parse_summary_text(raw);
    }
    ingest::LoadReport insurer;
    if (auto it = insurer_by_year.find(year); it != insurer_by_year.end())
      insurer = ingest::load_insurer_rows(it->second);

    ingest::MergeDiagnostics diag;
    auto rows = ingest::merge_rows(parsed.rows, insurer.rows, &diag);
    const auto ytag = std::to_string(year);
    ingest::write_dataset_csv(fs::path(cfg.out_dir) / ("dataset_" + ytag + ".csv"), rows);
    ingest::write_rejects_csv(fs::path(cfg.out_dir) / ("rejects_" + ytag + ".csv"),
                              parsed.rejects);
    json y;
    y["rows"] = rows.size();
    y["summary_rows"] = parsed.rows.size();
    y["rejects"] = parsed.rejects.size();
    y["matched"] = diag.matched;
    y["summary_only"] = diag.summary_only;
    y["insurer_only"] = diag.insurer_only;
    y["warnings"] = diag.warnings;
    meta["years"][ytag] = y;
  }
  std::ofstream(fs::path(cfg.out_dir) / "build_metadata.json") << meta.dump(2) << '\n';
  return 0;
}

// ---------------- synth ----------------

struct SynthCliConfig {
  int k = 100;
  int states = 1;
  double beta_true = 10000.0;
  std::string size_law = "uniform:2001,50000";
  std::string drift_law = "zero";
  std::string shock_law = "normal";
  std::uint64_t seed = 1;
  int year = 2017;
  std::string out_dir;
};

synth::SizeLaw parse_size_law(const std::string& s) {
  auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::string rest = s.substr(colon + 1);
    std::size_t at = 0;
    while (at <= rest.size()) {
      auto comma = rest.find(',', at);
      const auto tok = rest.substr(at, comma == std::string::npos ? comma : comma - at);
      if (auto v = csv::parse_double(tok)) args.push_back(*v);
      if (comma == std::string::npos) break;
      at = comma + 1;
    }
  }
  if (kind == "fixed" && args.size() == 1) return synth::SizeLaw::fixed(args[0]);
  if (kind == "uniform" && args.size() == 2) return synth::SizeLaw::uniform(args[0], args[1]);
  if (kind == "loguniform" && args.size() == 2)
    return synth::SizeLaw::log_uniform(args[0], args[1]);
  throw CLI::ValidationError("--size-law", "expected fixed:N, uniform:LO,HI or loguniform:LO,HI");
}

int cmd_synth(const SynthCliConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  synth::SynthConfig sc;
  sc.k = cfg.k;
  sc.states = cfg.states;
  sc.beta_true = cfg.beta_true;
  sc.size_law = parse_size_law(cfg.size_law);
  sc.seed = cfg.seed;
  sc.year = cfg.year;
  if (cfg.shock_law == "normal")
    sc.shock_law = synth::ShockLaw::normal;
  else if (cfg.shock_law == "lognormal")
    sc.shock_law = synth::ShockLaw::lognormal_patient;
  else
    throw CLI::ValidationError("--shock-law", "expected normal or lognormal");

  std::string drift = cfg.drift_law;
  if (drift == "zero") {
    sc.drift_law = synth::DriftLaw::zero();
  } else if (drift.rfind("normal:", 0) == 0) {
    auto v = csv::parse_double(drift.substr(7));
    if (!v) throw CLI::ValidationError("--drift-law", "expected normal:SIGMA");
    sc.drift_law = synth::DriftLaw::normal(*v);
  } else if (drift == "normal-matched") {
    // sigma_c giving expected drift volume equal to expected shock volume
    auto probe = sc;
    probe.drift_law = synth::DriftLaw::zero();
    auto market = synth::generate_market(probe);
    std::vector<double> sizes;
    for (const auto& r : market.sample.records) sizes.push_back(*r.member_months);
    sc.drift_law = synth::DriftLaw::normal(synth::drift_sigma_for_equal_volume(sizes, sc.beta_true));
  } else if (drift.rfind("twopoint:", 0) == 0) {
    auto rest = drift.substr(9);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--drift-law", "expected twopoint:VALUE,PROB");
    auto v = csv::parse_double(rest.substr(0, comma));
    auto p = csv::parse_double(rest.substr(comma + 1));
    if (!v || !p) throw CLI::ValidationError("--drift-law", "expected twopoint:VALUE,PROB");
    sc.drift_law = synth::DriftLaw::two_point(*v, *p);
  } else {
    throw CLI::ValidationError("--drift-law",
                               "expected zero, normal:SIGMA, normal-matched or twopoint:V,P");
  }

  auto market = synth::generate_market(sc);

  std::vector<ingest::DatasetRow> rows;
  for (const auto& rec : market.sample.records) {
    ingest::DatasetRow row;
    ingest::SummaryRow s;
    s.hios_id = rec.hios_id;
    s.company_name = rec.company_name;
    s.state = rec.state;
    s.ra_transfer_small_group = rec.transfer;
    row.summary = std::move(s);
    ingest::InsurerTableRow x;
    x.hios_id = rec.hios_id;
    x.company_name = rec.company_name;
    x.state = rec.state;
    x.small_group.member_months = rec.member_months;
    x.small_group.premiums = rec.premiums;
    x.small_group.claims = rec.costs;
    x.small_group.transfer = rec.transfer;
    row.insurer = std::move(x);
    rows.push_back(std::move(row));
  }
  const auto ytag = std::to_string(cfg.year);
  ingest::write_dataset_csv(fs::path(cfg.out_dir) / ("dataset_" + ytag + ".csv"), rows);

  json truth;
  truth["beta_true"] = market.truth.beta_true;
  truth["seed"] = market.truth.seed;
  truth["generator"] = kGeneratorId;
  truth["drift_sigma"] =
      sc.drift_law.kind == synth::DriftLaw::Kind::normal ? sc.drift_law.sigma : 0.0;
  json drift_rows = json::array();
  for (std::size_t i = 0; i < market.sample.records.size(); ++i) {
    const auto& rec = market.sample.records[i];
    drift_rows.push_back({{"hios_id", rec.hios_id}, {"state", rec.state},
                          {"c", market.truth.drift[i]}});
  }
  truth["drift"] = std::move(drift_rows);
  std::ofstream(fs::path(cfg.out_dir) / "truth.json") << truth.dump(2) << '\n';
  return 0;
}

// ---------------- analyze ----------------

struct AnalyzeConfig {
  std::vector<std::string> inputs;
  std::string market = "small-group";
  std::string group = "all";
  double alpha = 0.05;
  int J = 15;
  int runs = 5;
  int trials = 100000;
  double percentile = 10.0;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string cost_index = "identity";
  std::string recenter = "off";
  std::string ground_truth;
};

int cmd_analyze(const AnalyzeConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const ingest::Market market = cfg.market == "individual" ? ingest::Market::individual
                                                           : ingest::Market::small_group;
  json meta;
  meta["tool"] = kToolVersion;
  meta["command"] = "analyze";
  meta["generator"] = kGeneratorId;
  meta["seed"] = cfg.seed;
  meta["config"] = {{"market", cfg.market},   {"group", cfg.group},
                    {"alpha", cfg.alpha},     {"J", cfg.J},
                    {"runs", cfg.runs},       {"trials", cfg.trials},
                    {"percentile", cfg.percentile}, {"cost_index", cfg.cost_index},
                    {"recenter", cfg.recenter}};
  meta["notes"] = json::array({
      "normal-comparison p2 follows the binomial summation from s2+1 (strictly more "
      "than s2 interior points), not the 's2 or more' prose",
  });

  // load and pool all benefit years
  MarketSample full;
  for (const auto& spec : cfg.inputs) {
    auto [year, path] = split_year_input(spec);
    auto rows = ingest::read_dataset_csv(path);
    auto sample = ingest::to_market_sample(rows, year, market);
    for (auto& rec : sample.records) full.records.push_back(std::move(rec));
    meta["inputs"].push_back({{"path", path}, {"year", year}, {"rows", rows.size()}});
  }
  rebuild_partitions(full);
  if (full.records.empty()) throw DataError("no input records");

  auto restrict = resolve_group(cfg.group, full, cfg.seed, meta);
  ingest::SelectConfig sel;
  sel.restrict_states = restrict;
  MarketSample selected = ingest::select_sample(full, sel);
  if (selected.records.empty()) throw DataError("sample is empty after selection");
  if (cfg.recenter == "on") recenter_transfers(selected);

  ingest::CostIndex index;
  if (cfg.cost_index == "identity")
    index = ingest::CostIndex::identity();
  else if (cfg.cost_index == "derive")
    index = ingest::derive_cost_index(selected);
  else
    index = ingest::load_cost_index(cfg.cost_index);
  MarketSample sample = ingest::normalize_dollars(selected, index);
  meta["cost_index_id"] = index.id;
  meta["k"] = sample.records.size();

  const auto series = normalized_series(sample);

  // beta three ways
  std::vector<BetaEstimate> estimates;
  estimates.push_back(estimate::estimate_beta_halfnormal(series, cfg.alpha));
  {
    estimate::SimulationEstOptions opts;
    opts.J = cfg.J;
    opts.runs = cfg.runs;
    opts.alpha = cfg.alpha;
    estimates.push_back(
        estimate::estimate_beta_simulation(sample, opts, mix_seed(cfg.seed, kSeedSimulationEst)));
  }
  {
    estimate::PercentileEstOptions opts;
    opts.percentile = cfg.percentile;
    opts.trials = cfg.trials;
    estimates.push_back(
        estimate::estimate_beta_percentile(sample, opts, mix_seed(cfg.seed, kSeedPercentileEst)));
  }
  if (!cfg.ground_truth.empty()) {
    std::ifstream in(cfg.ground_truth);
    if (!in) throw DataError("cannot open " + cfg.ground_truth);
    json truth = json::parse(in);
    BetaEstimate gt;
    gt.beta = truth.at("beta_true").get<double>();
    gt.method = BetaMethod::ground_truth;
    gt.critical_value = estimate::kolmogorov_critical(cfg.alpha);
    estimates.push_back(gt);
  }

  // outlier reports; simulation-mode p-values when the trial budget allows
  const bool sim_mode = cfg.trials >= 1000;
  std::vector<stattests::OutlierReport> outliers;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    auto& est = estimates[i];
    auto rep = stattests::outlier_pvalue(
        sample, est.beta, sim_mode ? stattests::PvalueMode::simulation : stattests::PvalueMode::binomial,
        cfg.trials, mix_seed(cfg.seed, kSeedOutlierSim, i));
    est.outlier_fraction = rep.fraction;
    est.p_value = rep.p_value;
    outliers.push_back(rep);
  }

  // largest transfer in units of the half-normal beta
  {
    const auto se = stattests::sigma_exceedance(series, estimates.front().beta);
    json sej;
    sej["beta_method"] = "half-normal";
    sej["max_ratio"] = se.max_ratio;
    sej["tail_probability"] = se.tail_probability;
    meta["sigma_exceedance"] = sej;
  }

  // dominance at ground truth, when present (drift diagnostics)
  if (!cfg.ground_truth.empty()) {
    const auto& gt = estimates.back();
    estimate::Ecdf emp(abs_values(series));
    const double beta = gt.beta;
    estimate::ContinuousRef ref{[beta](double v) { return half_normal_cdf(v, beta); }};
    auto rep = estimate::dominance_test(emp, ref, emp.size(), cfg.alpha);
    json gt_meta;
    gt_meta["beta_true"] = gt.beta;
    gt_meta["dominated_at_beta_true"] = rep.dominated;
    gt_meta["dominance_statistic"] = rep.statistic;
    meta["ground_truth"] = gt_meta;
  }

  // Table 1-shaped estimates (half-normal and simulation)
  {
    csv::Table t;
    t.header = {"state_group", "k",      "method",          "beta",
                "outlier_fraction", "p_value", "p_value_trials", "dominance_point",
                "dominance_length", "critical_value", "seeds"};
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const auto& est = estimates[i];
      if (est.method == BetaMethod::percentile) continue;
      t.rows.push_back({cfg.group, std::to_string(sample.records.size()), to_string(est.method),
                        csv::fmt_double(est.beta), csv::fmt_double(est.outlier_fraction),
                        pvalue_cell(est.p_value, outliers[i].trials),
                        std::to_string(outliers[i].trials),
                        est.dominance_point ? csv::fmt_double(*est.dominance_point) : "",
                        est.dominance_length ? csv::fmt_double(*est.dominance_length) : "",
                        csv::fmt_double(est.critical_value), seeds_cell(est.seeds)});
    }
    csv::write_file(fs::path(cfg.out_dir) / "beta_estimates.csv", t);
  }
  // Table 2-shaped percentile estimates
  {
    csv::Table t;
    t.header = {"state_group", "k", "percentile", "beta", "outlier_fraction", "p_value",
                "p_value_trials", "seeds"};
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const auto& est = estimates[i];
      if (est.method != BetaMethod::percentile) continue;
      t.rows.push_back({cfg.group, std::to_string(sample.records.size()),
                        csv::fmt_double(cfg.percentile), csv::fmt_double(est.beta),
                        csv::fmt_double(est.outlier_fraction),
                        pvalue_cell(est.p_value, outliers[i].trials),
                        std::to_string(outliers[i].trials), seeds_cell(est.seeds)});
    }
    csv::write_file(fs::path(cfg.out_dir) / "percentile_estimates.csv", t);
  }
  // Table 3- and Table 5-shaped volume reports
  {
    csv::Table t3, t5;
    t3.header = {"state_group", "beta_method", "beta", "f", "non_random_fraction"};
    t5.header = {"state_group", "beta_method", "realized_abs_transfers",
                 "expected_abs_transfers"};
    for (const auto& est : estimates) {
      const auto rep = volume::volume_report(sample, est);
      t3.rows.push_back({cfg.group, to_string(est.method), csv::fmt_double(est.beta),
                         csv::fmt_double(rep.f), csv::fmt_double(rep.non_random_fraction)});
      t5.rows.push_back({cfg.group, to_string(est.method), csv::fmt_double(rep.realized),
                         csv::fmt_double(rep.expected)});
    }
    csv::write_file(fs::path(cfg.out_dir) / "volume_ratios.csv", t3);
    csv::write_file(fs::path(cfg.out_dir) / "volume_sums.csv", t5);
  }
  // Table 4-shaped normality tests per state-year
  {
    csv::Table t;
    t.header = {"state", "year", "k", "sw_w", "sw_p", "nc_p2", "nc_beta0", "nc_delta0"};
    for (const auto& part : partition_view(sample)) {
      NormalizedSeries ps;
      for (std::size_t i : part.records) {
        ps.values.push_back(normalize_transfer(sample.records[i]));
        ps.source.push_back(i);
      }
      std::vector<std::string> row = {part.key.state, std::to_string(part.key.year),
                                      std::to_string(part.records.size()), "", "", "", "", ""};
      if (ps.values.size() >= 3 && ps.values.size() <= 5000) {
        try {
          const auto sw = stattests::shapiro_wilk(ps.values);
          row[3] = csv::fmt_double(sw.w);
          row[4] = csv::fmt_double(sw.p_value);
        } catch (const std::invalid_argument&) {
          // degenerate partition (zero range); leave cells empty
        }
      }
      if (!ps.values.empty()) {
        const auto nc = stattests::nc_test(ps);
        row[5] = csv::fmt_double(nc.p2);
        row[6] = csv::fmt_double(nc.beta0);
        row[7] = csv::fmt_double(nc.delta0);
      }
      t.rows.push_back(std::move(row));
    }
    csv::write_file(fs::path(cfg.out_dir) / "normality_tests.csv", t);
  }
  // plot data: empirical |Tbar| ECDF against the fitted half-normal CDF
  {
    const auto& hn = estimates.front();
    estimate::Ecdf emp(abs_values(series));
    csv::Table t;
    t.header = {"v", "f_empirical", "f_halfnormal"};
    for (double v : emp.sorted())
      t.rows.push_back({csv::fmt_double(v), csv::fmt_double(emp(v)),
                        csv::fmt_double(half_normal_cdf(v, hn.beta))});
    csv::write_file(fs::path(cfg.out_dir) / "plot_ecdf.csv", t);
  }
  // replicate dump for external plotting
  {
    const auto& hn = estimates.front();
    auto series_dump =
        mcsim::run_algorithm1(sample, hn.beta, cfg.J, mix_seed(cfg.seed, kSeedSeriesDump));
    csv::Table t;
    t.header = {"replicate", "state", "year", "hios_id", "t_bar_sim"};
    for (const auto& rep : series_dump) {
      for (std::size_t i = 0; i < rep.values.size(); ++i) {
        const auto& rec = sample.records[i];
        t.rows.push_back({std::to_string(rep.iteration), rec.state, std::to_string(rec.year),
                          rec.hios_id, csv::fmt_double(rep.values[i])});
      }
    }
    csv::write_file(fs::path(cfg.out_dir) / "sim_series.csv", t);
  }

  std::ofstream(fs::path(cfg.out_dir) / "run_metadata.json") << meta.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"insurer risk-transfer analysis"};
  app.require_subcommand(1);

  BuildConfig build;
  auto* cb = app.add_subcommand("build-dataset",
                                "parse summary text and insurer tables into per-year datasets");
  cb->add_option("--summary", build.summary_inputs, "YYYY=path to summary-report text dump")
      ->required();
  cb->add_option("--insurer", build.insurer_inputs, "YYYY=path to insurer-report table");
  cb->add_option("--out", build.out_dir, "output directory")->required();

  SynthCliConfig synth_cfg;
  auto* cs = app.add_subcommand("synth", "generate a synthetic market with known ground truth");
  cs->add_option("--k", synth_cfg.k, "number of insurers");
  cs->add_option("--states", synth_cfg.states, "number of zero-sum partitions");
  cs->add_option("--beta-true", synth_cfg.beta_true, "true shock scale b");
  cs->add_option("--size-law", synth_cfg.size_law, "fixed:N | uniform:LO,HI | loguniform:LO,HI");
  cs->add_option("--drift-law", synth_cfg.drift_law,
                 "zero | normal:SIGMA | normal-matched | twopoint:VALUE,PROB");
  cs->add_option("--shock-law", synth_cfg.shock_law, "normal | lognormal");
  cs->add_option("--seed", synth_cfg.seed, "random seed");
  cs->add_option("--year", synth_cfg.year, "benefit year for the dataset");
  cs->add_option("--out", synth_cfg.out_dir, "output directory")->required();

  AnalyzeConfig an;
  auto* ca = app.add_subcommand("analyze", "estimate beta and volume reports from datasets");
  ca->add_option("--input", an.inputs, "dataset file (year inferred or YYYY=path)")->required();
  ca->add_option("--market", an.market, "individual | small-group")
      ->check(CLI::IsMember({"individual", "small-group"}));
  ca->add_option("--group", an.group,
                 "all | competitive | random-A | random-B | state code(s) like NY or NY+CA+WI");
  ca->add_option("--alpha", an.alpha, "dominance test level");
  ca->add_option("--J", an.J, "replicates per simulation run");
  ca->add_option("--runs", an.runs, "simulation estimator runs to average");
  ca->add_option("--trials", an.trials, "Monte Carlo trials for percentile/p-value simulations");
  ca->add_option("--percentile", an.percentile, "percentile for the fixed-percentile estimator");
  ca->add_option("--seed", an.seed, "master seed");
  ca->add_option("--out", an.out_dir, "output directory")->required();
  ca->add_option("--cost-index", an.cost_index, "identity | derive | path to index file");
  ca->add_option("--recenter", an.recenter, "re-center transfers per state-year: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  ca->add_option("--ground-truth", an.ground_truth, "truth.json from synth for extra reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cb->parsed()) return cmd_build_dataset(build);
    if (cs->parsed()) return cmd_synth(synth_cfg);
    if (ca->parsed()) return cmd_analyze(an);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.emplace_back("rtlab");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace rt::cli
