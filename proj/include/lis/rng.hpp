#pragma once

// Seeded random streams. Each (seed, index) pair gets its own generator, so
// results do not depend on the order in which trials are evaluated.

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace lis {

/// SplitMix64 finalizer applied to the pair; used as the stream seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) : eng_(stream_seed(seed, index)) {}

  double uniform(double lo, double hi) {
    return boost::random::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return boost::random::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::size_t index(std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }

 private:
  boost::random::mt19937_64 eng_;
};

}  // namespace lis
