#pragma once

#include <cstdint>
#include <initializer_list>

namespace beesim {

// Deterministic generator used everywhere randomness is needed. All streams
// are derived from a master seed through splitmix64 so that batch results do
// not depend on worker count or evaluation order. Gaussian and uniform draws
// are implemented here instead of <random> distributions, whose output is not
// pinned by the standard.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01();

  // Standard normal via Box-Muller; the paired value is cached.
  double gaussian();

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

 private:
  std::uint64_t state_[4];
  double cached_gauss_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64 step; the basis of all seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent child seed from a master seed and a path of indices,
// e.g. derive_seed(master, {kJourneyStream, journey_index}).
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

// Stream tags for derive_seed paths. Values are arbitrary but fixed: changing
// them changes every derived random sequence.
enum StreamTag : std::uint64_t {
  kJourneyStream = 0x6a6f75726e657901ull,
  kOutboundStream = 0x6f7574626f756eull,
  kNoiseStream = 0x6e6f69736501ull,
  kEvolutionStream = 0x65766f6c766501ull,
  kSourceStream = 0x736f7572636501ull,
};

}  // namespace beesim
