#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dbowsum {

// SplitMix64. Bit-stable across platforms, unlike the standard library
// distributions, so every seeded run reproduces exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). Modulo bias is below 1e-12 for bound <= 1e7.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from (seed, stream id).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 rng(seed ^ (stream + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
  return rng.next_u64();
}

// FNV-1a over a token list. A 0xff byte terminates each token so that
// ["ab","c"] and ["a","bc"] hash differently.
inline std::uint64_t fnv1a64(const std::vector<std::string>& tokens) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const std::string& token : tokens) {
    for (unsigned char c : token) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xffu;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dbowsum
