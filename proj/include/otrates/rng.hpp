#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace otrates {

// splitmix64 step; used both as a stand-alone mixer and to seed streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream key from a master seed and a list of identifiers
// (experiment id, grid index, replication index, ...). Streams derived from
// distinct id tuples are independent for practical purposes, and the scheme
// makes replications order-independent.
inline std::uint64_t derive_stream(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> ids) {
  std::uint64_t state = master;
  (void)splitmix64(state);
  for (std::uint64_t id : ids) {
    state ^= id + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    (void)splitmix64(state);
  }
  return splitmix64(state);
}

// xoshiro256** generator. All samplers in the library draw through this
// class with explicitly derived stream keys; the standard library
// distributions are avoided so that outputs are reproducible bit-for-bit
// across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) {
    std::uint64_t sm = stream_key;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1): 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform strictly inside (0, 1); safe to feed into inverse cdfs with
  // singularities at either endpoint.
  double uniform_open01() {
    return (double(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via Box-Muller on open-interval uniforms. Draws two
  // uniforms per call; no state is cached, so the stream position after k
  // calls is independent of the surrounding call pattern.
  double normal() {
    const double u = uniform_open01();
    const double v = uniform_open01();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace otrates
