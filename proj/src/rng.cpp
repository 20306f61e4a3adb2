#include "qoe/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qoe {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t token) {
  // Offset the token by 1 so derive(s, 0) differs from plain splitmix64(s),
  // keeping child streams distinct from a generator seeded with s directly.
  std::uint64_t state = seed + kGolden * (token + 1);
  return splitmix64_next(state);
}

std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose) {
  return derive_seed(seed, static_cast<std::uint64_t>(purpose));
}

Rng::Rng(std::uint64_t seed) {
  // xoshiro state must not be all zero; splitmix64 expansion guarantees that
  // and decorrelates nearby seeds.
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64_next(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
  // Rejection sampling: discard the short final interval so every residue is
  // equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::next_normal() {
  if (cached_normal_) {
    const double v = *cached_normal_;
    cached_normal_.reset();
    return v;
  }
  // Box-Muller. 1 - u keeps the argument of log strictly positive since
  // next_double can return 0 but never 1.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

} // namespace qoe
