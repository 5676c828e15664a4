// Deterministic random streams. All simulation draws are standard normal
// deviates from a fixed, versioned construction so that runs are reproducible
// and scaling in beta is exact: draws never depend on beta or units.
#pragma once

#include <cstdint>
#include <random>

namespace rt {

// Recorded in run metadata next to every seed.
inline constexpr const char* kGeneratorId = "mt19937_64/as241-icdf/v1";

// splitmix64; used only to derive child stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent child seed from (seed, tag). Chain for more keys.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Stream tags, one per independent consumer of randomness.
namespace stream {
inline constexpr std::uint64_t kAlg1 = 1;
inline constexpr std::uint64_t kRun = 2;
inline constexpr std::uint64_t kPercentile = 3;
inline constexpr std::uint64_t kSizes = 4;
inline constexpr std::uint64_t kShocks = 5;
inline constexpr std::uint64_t kDrift = 6;
inline constexpr std::uint64_t kMcVolume = 7;
inline constexpr std::uint64_t kOutlierSim = 8;
inline constexpr std::uint64_t kKsTrial = 9;
inline constexpr std::uint64_t kStateSplit = 10;
inline constexpr std::uint64_t kBatch = 11;
}  // namespace stream

class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0,1), 53-bit resolution, never exactly 0 or 1.
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

  // Standard normal via the inverse CDF.
  double normal();

  // Uniform integer in [lo, hi].
  long long uniform_int(long long lo, long long hi);

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rt
