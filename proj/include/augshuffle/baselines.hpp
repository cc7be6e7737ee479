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

#ifndef AUGSHUFFLE_BASELINES_H_
#define AUGSHUFFLE_BASELINES_H_

#include <cstdint>
#include <vector>

#include "augshuffle/engine.hpp"
#include "augshuffle/protocol.hpp"
#include "augshuffle/random.hpp"

namespace augshuffle {

// ---------------------------------------------------------------------------
// Single-message local randomizers.

// Reports the true item with probability e^{eps_l}/(e^{eps_l}+d-1), else a
// uniform other item.
int32_t GrrRandomize(int32_t x, double eps_l, int32_t d, Rng& rng);

// Unary encoding: the true bit is kept with probability 1/2, every other bit
// is set with probability 1/(e^{eps_l}+1).
void OueRandomize(int32_t x, double eps_l, int32_t d, Rng& rng,
                  std::vector<uint8_t>* out);

// Symmetric bit flips with probability 1/(e^{eps_l/2}+1).
void RapporRandomize(int32_t x, double eps_l, int32_t d, Rng& rng,
                     std::vector<uint8_t>* out);

struct OlhMessage {
  uint64_t hash_seed = 0;
  int32_t value = 0;  // in [0, range)
};

// Hash range ceil(e^{eps_l}) + 1.
int32_t OlhHashRange(double eps_l);
int32_t OlhHash(uint64_t hash_seed, int32_t item, int32_t range);
// Seeded hash of the item into the range, then randomized response over the
// hash range.
OlhMessage OlhRandomize(int32_t x, double eps_l, int32_t d, Rng& rng);

// One user's worth of messages per mechanism; exactly one of the containers
// is populated, matching the kind.
struct BaselineMessages {
  ProtocolKind kind = ProtocolKind::kGrrShuffle;
  std::vector<int32_t> items;                 // grr
  std::vector<std::vector<uint8_t>> bits;     // oue, rappor
  std::vector<OlhMessage> olh;                // olh
};

BaselineMessages RandomizeAll(ProtocolKind kind, const Dataset& dataset,
                              double eps_l, Rng& rng);

// Standard unbiased frequency estimator for the single-message mechanisms.
// n_population is the user count the collector believes it has (it includes
// fake users under poisoning).
FrequencyEstimate EmpiricalEstimate(const BaselineMessages& messages,
                                    int64_t n_population, double eps_l,
                                    int32_t d);

// ---------------------------------------------------------------------------
// Multi-message protocols.

struct MultiMessageParams {
  double q1 = 0.0;   // bc20 per-item dummy probability
  double q2 = 0.0;   // cm22 bit-flip probability
  int64_t xi = 0;    // cm22 dummy vectors per user
  double q3 = 0.0;   // lwy22 dummy probability
};

struct MultiMessageReport {
  ProtocolKind kind = ProtocolKind::kBc20;
  std::vector<int32_t> values;                // bc20, lwy22 value messages
  std::vector<std::vector<uint8_t>> vectors;  // cm22 bit vectors
  int64_t message_count = 0;
};

// Each user sends the input value plus, per item, a dummy with prob q1.
MultiMessageReport Bc20Round(const Dataset& dataset, double q1, Rng& rng);
// Each user sends the bit-flipped one-hot vector plus xi flipped zero vectors.
MultiMessageReport Cm22Round(const Dataset& dataset, double q2, int64_t xi,
                             Rng& rng);
// Each user sends the input value plus, with prob q3, one uniform dummy.
MultiMessageReport Lwy22Round(const Dataset& dataset, double q3, Rng& rng);

FrequencyEstimate MultiMessageEstimate(const MultiMessageReport& report,
                                       int64_t n_population,
                                       const MultiMessageParams& params,
                                       int32_t d);

// ---------------------------------------------------------------------------
// Analytic loss predictors.

// Expected l2 loss of a protocol at the given end-to-end budget, using the
// exact pre-approximation expressions: the local-mechanism loss evaluated at
// the inverted local budget for single-message protocols, the exact dummy
// variance for multi-message protocols, and the generic variance
// decomposition for the local-noise-free protocols.
double BaselineExpectedL2(ProtocolKind kind, double eps, double delta,
                          int64_t n, int32_t d);

// Local-mechanism loss columns as functions of the local budget.
double GrrLocalL2(double eps_l, int64_t n, int32_t d);
double OueLocalL2(double eps_l, int64_t n, int32_t d);
double RapporLocalL2(double eps_l, int64_t n, int32_t d);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_BASELINES_H_
