#pragma once

#include <cstdint>
#include <random>

namespace cqsim {

// splitmix64 finalizer; used to derive independent per-shot streams from a
// 64-bit seed so histograms are reproducible across platforms.
inline std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0,1); mt19937_64 output is standard-specified, and the
  // mapping below avoids the implementation-defined distributions.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int bit() { return static_cast<int>(engine_() >> 63); }

 private:
  std::mt19937_64 engine_;
};

// Counter-based derivation: stream for shot k of a seeded experiment.
inline Prng shot_rng(std::uint64_t seed, std::uint64_t shot) {
  return Prng(mix64(mix64(seed) + 0x632be59bd9b4e019ULL * (shot + 1)));
}

// Source of random bits with stated probabilities. The sampler draws from a
// Prng; the branch enumerator forks instead, which is what makes exhaustive
// exact-probability enumeration reuse the ordinary execution path.
struct BitSource {
  virtual ~BitSource() = default;
  virtual int take(double p_one) = 0;
};

class RandomBitSource final : public BitSource {
 public:
  explicit RandomBitSource(Prng& rng) : rng_(rng) {}
  int take(double p_one) override { return rng_.uniform() < p_one ? 1 : 0; }

 private:
  Prng& rng_;
};

}  // namespace cqsim
