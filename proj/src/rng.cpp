#include "rt/rng.hpp"

#include "rt/mathx.hpp"

namespace rt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(seed, a, b), c);
}

double NormalRng::normal() { return norm_quantile(uniform()); }

long long NormalRng::uniform_int(long long lo, long long hi) {
  const double span = static_cast<double>(hi - lo) + 1.0;
  auto off = static_cast<long long>(uniform() * span);
  if (off > hi - lo) off = hi - lo;
  return lo + off;
}

}  // namespace rt
