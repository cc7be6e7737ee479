// Copyright 2026 The augshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUGSHUFFLE_RANDOM_H_
#define AUGSHUFFLE_RANDOM_H_

#include <cstdint>
#include <vector>

namespace augshuffle {

inline uint64_t SplitMix64Next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Maps (seed, stream) pairs to well-separated PRNG seeds.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  uint64_t a = SplitMix64Next(s);
  uint64_t b = SplitMix64Next(s);
  return a ^ (b << 1);
}

// xoshiro256** with a fixed, portable bit stream. All randomized code in
// this library goes through this generator so that runs are reproducible
// from a single root seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& word : state_) word = SplitMix64Next(s);
  }

  uint64_t NextU64() {
    const uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double NextUnit() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe to pass to log().
  double NextUnitOpen() { return 1.0 - NextUnit(); }

  bool Bernoulli(double p) { return NextUnit() < p; }

  // Uniform integer in [0, bound) without modulo bias (Lemire's method).
  uint64_t UniformIndex(uint64_t bound) {
    uint64_t x = NextU64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = NextU64();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

 private:
  static uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

// One root seed per run, split into named independent streams. The augmented
// shuffle report path and the histogram fast path consume the same streams in
// the same order, which makes the two couplable run for run.
struct SeedSchedule {
  uint64_t root = 0;

  Rng Stream(uint64_t id) const { return Rng(DeriveSeed(root, id)); }
};

template <typename T>
void FisherYatesShuffle(std::vector<T>& values, Rng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformIndex(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace augshuffle

#endif  // AUGSHUFFLE_RANDOM_H_
