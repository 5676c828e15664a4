#include "rt/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rt/rng.hpp"

namespace rt::synth {

namespace {

double draw_size(const SizeLaw& law, NormalRng& rng) {
  switch (law.kind) {
    case SizeLaw::Kind::fixed:
      return law.a;
    case SizeLaw::Kind::uniform_int:
      return static_cast<double>(rng.uniform_int(static_cast<long long>(law.a),
                                                 static_cast<long long>(law.b)));
    case SizeLaw::Kind::log_uniform: {
      const double u = rng.uniform();
      return std::floor(std::exp(std::log(law.a) + u * (std::log(law.b) - std::log(law.a))));
    }
  }
  throw std::logic_error("draw_size: bad kind");
}

double draw_drift(const DriftLaw& law, NormalRng& rng) {
  switch (law.kind) {
    case DriftLaw::Kind::zero:
      return 0.0;
    case DriftLaw::Kind::normal:
      return law.sigma * rng.normal();
    case DriftLaw::Kind::two_point:
      return rng.uniform() < law.prob ? law.value : 0.0;
  }
  throw std::logic_error("draw_drift: bad kind");
}

// Aggregate health-shock term for one insurer: Normal(0, b^2) * sqrt(n), or
// the centered sum of n log-normal per-patient draws with variance b^2.
double draw_shock(ShockLaw law, double b, double n, NormalRng& rng) {
  if (b <= 0.0) return 0.0;
  if (law == ShockLaw::normal) return b * std::sqrt(n) * rng.normal();
  // log-normal with mean b and variance b^2: sigma_ln^2 = ln 2.
  static const double s2 = std::log(2.0);
  const double mu = std::log(b) - 0.5 * s2;
  const double sln = std::sqrt(s2);
  const auto count = static_cast<long long>(n);
  double sum = 0.0;
  for (long long j = 0; j < count; ++j) sum += std::exp(mu + sln * rng.normal()) - b;
  return sum;
}

std::string synth_state_code(int index) {
  char buf[3] = {static_cast<char>('A' + index / 26), static_cast<char>('A' + index % 26), 0};
  return buf;
}

void validate(const SynthConfig& c) {
  if (c.states < 1) throw std::invalid_argument("synth: states must be >= 1");
  if (c.k < 2 * c.states)
    throw std::invalid_argument("synth: need at least 2 insurers per partition");
  if (c.k > 89999) throw std::invalid_argument("synth: k too large for 5-digit ids");
  if (c.beta_true < 0.0) throw std::invalid_argument("synth: beta_true must be >= 0");
  if (c.states > 26 * 26) throw std::invalid_argument("synth: too many partitions");
  switch (c.size_law.kind) {
    case SizeLaw::Kind::fixed:
      if (c.size_law.a <= 0) throw std::invalid_argument("synth: fixed size must be positive");
      break;
    case SizeLaw::Kind::uniform_int:
    case SizeLaw::Kind::log_uniform:
      if (c.size_law.a <= 0 || c.size_law.b < c.size_law.a)
        throw std::invalid_argument("synth: size bounds must satisfy 0 < a <= b");
      break;
  }
  if (c.drift_law.kind == DriftLaw::Kind::two_point &&
      (c.drift_law.prob < 0.0 || c.drift_law.prob > 1.0))
    throw std::invalid_argument("synth: two-point probability must be in [0,1]");
  if (c.shock_law == ShockLaw::lognormal_patient && c.beta_true > 0 && c.states > 0) {
    // patient-level simulation walks every member month
    double cap = 2e8;
    if (c.size_law.b * static_cast<double>(c.k) > cap)
      throw std::invalid_argument("synth: log-normal patient mode too large; use normal shocks");
  }
}

}  // namespace

double drift_sigma_for_equal_volume(const std::vector<double>& sizes, double beta_true) {
  double sum_sqrt = 0.0, sum = 0.0;
  for (double n : sizes) {
    sum_sqrt += std::sqrt(n);
    sum += n;
  }
  if (sum <= 0.0) throw std::domain_error("drift_sigma_for_equal_volume: empty sizes");
  return beta_true * sum_sqrt / sum;
}

SynthMarket generate_market(const SynthConfig& config) {
  validate(config);
  SynthMarket out;
  out.truth.beta_true = config.beta_true;
  out.truth.seed = config.seed;

  // Sizes first, from their own stream, so callers can reproduce them
  // independently of the drift/shock configuration.
  NormalRng size_rng(mix_seed(config.seed, stream::kSizes));
  std::vector<double> sizes(static_cast<std::size_t>(config.k));
  for (auto& n : sizes) n = draw_size(config.size_law, size_rng);

  NormalRng drift_rng(mix_seed(config.seed, stream::kDrift));
  std::vector<double> drift(static_cast<std::size_t>(config.k));
  for (auto& c : drift) c = draw_drift(config.drift_law, drift_rng);

  const int base = config.k / config.states;
  const int extra = config.k % config.states;
  std::size_t at = 0;
  for (int s = 0; s < config.states; ++s) {
    const int count = base + (s < extra ? 1 : 0);
    NormalRng shock_rng(mix_seed(config.seed, stream::kShocks, static_cast<std::uint64_t>(s)));
    std::vector<double> t(static_cast<std::size_t>(count));
    double transfer_total = 0.0, size_total = 0.0;
    for (int i = 0; i < count; ++i) {
      const double n = sizes[at + static_cast<std::size_t>(i)];
      t[static_cast<std::size_t>(i)] =
          draw_shock(config.shock_law, config.beta_true, n, shock_rng) +
          drift[at + static_cast<std::size_t>(i)] * n;
      transfer_total += t[static_cast<std::size_t>(i)];
      size_total += n;
    }
    // Zero-sum projection: real transfers sum to zero within each state.
    for (int i = 0; i < count; ++i)
      t[static_cast<std::size_t>(i)] -=
          transfer_total * (sizes[at + static_cast<std::size_t>(i)] / size_total);

    const std::string state = synth_state_code(s);
    for (int i = 0; i < count; ++i) {
      const double n = sizes[at + static_cast<std::size_t>(i)];
      InsurerRecord rec;
      char id[8];
      std::snprintf(id, sizeof(id), "%05zu", at + static_cast<std::size_t>(i) + 10001);
      rec.hios_id = id;
      rec.company_name = "SYNTH CARRIER " + std::string(id);
      rec.state = state;
      rec.year = config.year;
      rec.member_months = n;
      rec.transfer = t[static_cast<std::size_t>(i)];
      rec.premiums = 400.0 * n;
      rec.costs = 320.0 * n;
      out.sample.records.push_back(std::move(rec));
    }
    at += static_cast<std::size_t>(count);
  }
  out.truth.drift = std::move(drift);
  rebuild_partitions(out.sample);
  return out;
}

}  // namespace rt::synth
