#pragma once

#include <cstdint>
#include <optional>

namespace qoe {

// Named purposes for deriving independent substreams from one master seed.
// Keeping the numeric tags explicit (and never reordering them) is what makes
// published results reproducible from a single seed.
enum class StreamPurpose : std::uint64_t {
  kSites = 1,
  kConnectivity = 2,
  kRasee = 3,
  kPositionSuperposition = 4,
  kBlipNoise = 5,
  kRaseeDynamics = 6,
  kConfigStream = 7,
};

// splitmix64 finalizer step; also used standalone to stretch a seed into
// xoshiro state. Public because seed derivation wants the same mixing.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Derive a child seed from (seed, token). Children for distinct tokens are
// statistically independent; the map is pure so any (master, purpose, index)
// chain always lands on the same stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t token);
std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose);

// xoshiro256++ with splitmix64 seeding. Chosen over std::mt19937_64 because
// the standard distributions are not bit-reproducible across library
// implementations; this generator plus the transforms below is fully
// specified by this repo. The integer stream is portable; double transforms
// go through libm (exp/log/cos), which is the usual caveat.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1): 53 mantissa bits, never returns 1.0.
  double next_double();

  // Uniform integer in [0, bound) by rejection, no modulo bias. bound > 0.
  std::uint64_t next_below(std::uint64_t bound);

  // Standard normal via Box-Muller. The pair is cached, so draws come in
  // alternating cheap/expensive calls.
  double next_normal();

 private:
  std::uint64_t s_[4];
  std::optional<double> cached_normal_;
};

} // namespace qoe
