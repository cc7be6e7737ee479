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

#ifndef AUGSHUFFLE_ADVERSARY_H_
#define AUGSHUFFLE_ADVERSARY_H_

#include <cstdint>
#include <vector>

#include "augshuffle/baselines.hpp"
#include "augshuffle/engine.hpp"
#include "augshuffle/protocol.hpp"

namespace augshuffle {

// Targeted poisoning: lambda = n' / (n + n') fake users promoting the items
// in `targets`.
struct AttackSpec {
  double lambda = 0.0;
  std::vector<int32_t> targets;
  uint64_t seed = 0;

  int64_t FakeCount(int64_t n) const;
};

// Targets drawn uniformly without replacement from [1, d].
AttackSpec MakeAttackSpec(double lambda, int32_t target_count, int32_t d,
                          uint64_t seed);

// Messages the fake users send, maximizing the expected total frequency gain
// over the target set while keeping expected message counts unchanged for the
// multi-message protocols (so the attack is not trivially detectable).
struct FakeMessages {
  std::vector<int32_t> items;                 // proposed, grr, bc20, lwy22
  std::vector<std::vector<uint8_t>> bits;     // oue, rappor, cm22
  std::vector<OlhMessage> olh;                // olh
  int64_t message_count = 0;
};

struct AttackParams {
  double eps_l = 0.0;            // single-message kinds
  MultiMessageParams multi;      // bc20/cm22/lwy22
};

FakeMessages MgaFakeMessages(ProtocolKind kind, const AttackSpec& spec,
                             const AttackParams& params, int32_t d, int64_t n,
                             Rng& rng);

struct DefenseOptions {
  bool significance_threshold = false;
  double alpha_sig = 0.05;
  bool normalize = false;
};

struct GainReport {
  double empirical = 0.0;
  double predicted = 0.0;
  double std_err = 0.0;
  bool predicted_is_lower_bound = false;
  std::vector<double> per_target;
};

// Empirical overall gain: the mean over seeded runs of the summed target
// estimate shift between a poisoned and a clean execution. Defenses, when
// requested, are applied identically to both executions.
GainReport MeasureGain(ProtocolKind kind, const ProtocolConfig& config,
                       const Dataset& dataset, const AttackSpec& spec,
                       int runs, uint64_t seed,
                       const DefenseOptions* defense = nullptr);

// Analytic overall gain. Exact per-construction values for the proposed,
// randomized-response-family, and bc20 protocols; lower bounds for cm22 and
// lwy22 (flagged by MeasureGain's report).
double PredictedGain(ProtocolKind kind, double lambda, double f_t,
                     int32_t target_count, int32_t d, double eps, double delta,
                     int64_t n);

// Actual epsilon along a grid of colluding-user ratios.
std::vector<double> CollusionScenario(ProtocolKind kind, double target_eps,
                                      int64_t n,
                                      const std::vector<double>& omega_ratios,
                                      double delta, int32_t d);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_ADVERSARY_H_
