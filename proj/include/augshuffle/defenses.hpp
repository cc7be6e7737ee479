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

#ifndef AUGSHUFFLE_DEFENSES_H_
#define AUGSHUFFLE_DEFENSES_H_

#include <cstdint>
#include <vector>

#include "augshuffle/engine.hpp"
#include "augshuffle/random.hpp"

namespace augshuffle {

// Keeps only estimates above the Bonferroni-corrected significance threshold
// T = Phi^{-1}(1 - alpha_sig / d) * sqrt(variance_per_item) and spreads the
// residual probability mass uniformly over the suppressed entries (clamped at
// zero when the kept mass already exceeds one).
FrequencyEstimate SignificanceThreshold(const FrequencyEstimate& estimate,
                                        double variance_per_item,
                                        double alpha_sig);

// Shifts the minimum estimate to zero and rescales to sum one; an all-zero
// shifted vector becomes uniform.
FrequencyEstimate NormalizeDefense(const FrequencyEstimate& estimate);

// Shuffler-side dummy blanket: appends floor(a * n) messages drawn uniformly
// from the randomizer's output range.
struct WangDefended {
  std::vector<int32_t> messages;
  int64_t dummy_count = 0;
};

WangDefended WangDummyDefense(const std::vector<int32_t>& messages, double a,
                              int32_t range, Rng& rng);

// Unbiased frequency estimate from randomized-response messages with
// `dummy_count` uniform dummies mixed in: the dummy mean is subtracted from
// each count before the usual debiasing.
FrequencyEstimate GrrEstimateWithDummies(const std::vector<int32_t>& messages,
                                         int64_t n_population,
                                         int64_t dummy_count, double eps_l,
                                         int32_t d);

// Loss inflation factor (1 + a)^2 ascribed to the dummy blanket by its
// original analysis; used by the cost/utility tables.
inline double WangDefenseLossFactor(double a) { return (1.0 + a) * (1.0 + a); }

}  // namespace augshuffle

#endif  // AUGSHUFFLE_DEFENSES_H_
