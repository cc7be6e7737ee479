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

#ifndef AUGSHUFFLE_ENGINE_H_
#define AUGSHUFFLE_ENGINE_H_

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "augshuffle/accountant.hpp"
#include "augshuffle/dummy_dist.hpp"
#include "augshuffle/protocol.hpp"
#include "augshuffle/random.hpp"

namespace augshuffle {

// Categorical inputs: n values, each an item index in [1, d].
struct Dataset {
  int32_t d = 0;
  std::vector<int32_t> values;

  int64_t n() const { return static_cast<int64_t>(values.size()); }
  std::vector<int64_t> Counts() const;
  std::vector<double> TrueFrequencies() const;

  static Dataset FromValues(std::vector<int32_t> values, int32_t d);
};

// Output of the shuffler: sampled inputs plus dummies, permuted.
struct ShuffledReport {
  std::vector<int32_t> values;
};

struct NoisyHistogram {
  std::vector<int64_t> counts;

  int64_t Total() const;
};

struct FrequencyEstimate {
  std::vector<double> estimates;
  int64_t population = 0;  // user count the analyzer divided by
  double beta = 1.0;
  double mu = 0.0;
};

// Named seed streams. The report path and the histogram fast path consume
// kKeep and kDummy identically, so a shared root seed couples them.
inline constexpr uint64_t kStreamKeep = 1;
inline constexpr uint64_t kStreamDummy = 2;
inline constexpr uint64_t kStreamShuffle = 3;

std::vector<uint8_t> SampleKeepMask(int64_t n, double beta, Rng& rng);
std::vector<int64_t> SampleDummyCounts(const DummyCountDistribution& dist,
                                       int32_t d, Rng& rng);

// Deterministic cores shared by both pipeline paths.
NoisyHistogram BuildHistogram(const Dataset& dataset,
                              const std::vector<uint8_t>& keep,
                              const std::vector<int64_t>& dummies);
ShuffledReport BuildReport(const Dataset& dataset,
                           const std::vector<uint8_t>& keep,
                           const std::vector<int64_t>& dummies,
                           Rng& shuffle_rng);
NoisyHistogram HistogramOfReport(const ShuffledReport& report, int32_t d);

// Shuffler side: sample each input with probability beta, append per-item
// dummy counts drawn from dist, shuffle uniformly.
ShuffledReport AugmentedShuffle(const Dataset& dataset,
                                const DummyCountDistribution& dist, double beta,
                                const SeedSchedule& seeds);

// Histogram-equivalent fast path: per-record keeps plus per-item dummies,
// no materialized report. Equals HistogramOfReport(AugmentedShuffle(...))
// under the same root seed.
NoisyHistogram NoisyHistogramOf(const Dataset& dataset,
                                const DummyCountDistribution& dist, double beta,
                                const SeedSchedule& seeds);

// Analyzer side: unbiased estimate f_i = (h_i - mu) / (n beta).
FrequencyEstimate Analyze(const NoisyHistogram& histogram, int64_t n,
                          double beta, double mu, int32_t d);

struct ProtocolConfig {
  double epsilon = 1.0;
  double delta = 1e-12;
  double beta = 1.0;  // ignored by the pure-DP protocol, which fixes its own
  int alpha_bits = 2048;
};

// Protocol with its accountant-derived parameters baked in, so sweeps solve
// for them once rather than per run.
struct ResolvedProtocol {
  ProtocolKind kind = ProtocolKind::kSBin;
  double beta = 1.0;
  double mu = 0.0;
  double sigma2 = 0.0;  // exact variance of the dummy-count distribution
  std::shared_ptr<const DummyCountDistribution> dist;
};

ResolvedProtocol ResolveProtocol(ProtocolKind kind, const ProtocolConfig& config);

FrequencyEstimate RunProtocol(const ResolvedProtocol& protocol,
                              const Dataset& dataset, uint64_t seed);
FrequencyEstimate RunProtocol(ProtocolKind kind, const ProtocolConfig& config,
                              const Dataset& dataset, uint64_t seed);

// Expected loss of a resolved protocol per the variance decomposition:
// (1 - beta)/(beta n) + sigma^2 d / (beta^2 n^2).
double ExpectedL2Loss(const ResolvedProtocol& protocol, int64_t n, int32_t d);

// Value transport abstraction. The shuffler operates on opaque blobs; only
// the collector decrypts.
class Cipher {
 public:
  virtual ~Cipher() = default;
  virtual uint64_t Encrypt(int32_t value) const = 0;
  virtual int32_t Decrypt(uint64_t blob) const = 0;
  virtual int CiphertextBits() const = 0;
};

class NullCipher final : public Cipher {
 public:
  explicit NullCipher(int ciphertext_bits = 2048) : bits_(ciphertext_bits) {}
  uint64_t Encrypt(int32_t value) const override {
    return static_cast<uint64_t>(value);
  }
  int32_t Decrypt(uint64_t blob) const override {
    return static_cast<int32_t>(blob);
  }
  int CiphertextBits() const override { return bits_; }

 private:
  int bits_;
};

class XorMaskCipher final : public Cipher {
 public:
  explicit XorMaskCipher(uint64_t mask, int ciphertext_bits = 64)
      : mask_(mask), bits_(ciphertext_bits) {}
  uint64_t Encrypt(int32_t value) const override {
    return static_cast<uint64_t>(static_cast<uint32_t>(value)) ^ mask_;
  }
  int32_t Decrypt(uint64_t blob) const override {
    return static_cast<int32_t>(static_cast<uint32_t>(blob ^ mask_));
  }
  int CiphertextBits() const override { return bits_; }

 private:
  uint64_t mask_;
  int bits_;
};

struct MessageCounts {
  int64_t users_to_shuffler = 0;
  int64_t shuffler_to_collector = 0;
};

// End-to-end run over encrypted blobs: users encrypt, the shuffler samples,
// appends encrypted dummies and shuffles without decrypting, the collector
// decrypts and analyzes. Under the same seed the estimate equals
// RunProtocol's.
std::pair<FrequencyEstimate, MessageCounts> PipelineWithCipher(
    const Dataset& dataset, const ResolvedProtocol& protocol,
    const Cipher& cipher, uint64_t seed);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_ENGINE_H_
