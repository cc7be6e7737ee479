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

#include "augshuffle/defenses.hpp"

#include <cmath>
#include <stdexcept>

#include "augshuffle/stats.hpp"

namespace augshuffle {

FrequencyEstimate SignificanceThreshold(const FrequencyEstimate& estimate,
                                        double variance_per_item,
                                        double alpha_sig) {
  if (!(variance_per_item > 0.0)) {
    throw std::domain_error("SignificanceThreshold: variance must be > 0");
  }
  const double d = static_cast<double>(estimate.estimates.size());
  const double threshold =
      InverseNormalCdf(1.0 - alpha_sig / d) * std::sqrt(variance_per_item);
  FrequencyEstimate result = estimate;
  double kept_mass = 0.0;
  int64_t suppressed = 0;
  for (const double value : estimate.estimates) {
    if (value > threshold) {
      kept_mass += value;
    } else {
      ++suppressed;
    }
  }
  const double residual =
      suppressed > 0
          ? std::max(0.0, 1.0 - kept_mass) / static_cast<double>(suppressed)
          : 0.0;
  for (double& value : result.estimates) {
    if (!(value > threshold)) value = residual;
  }
  return result;
}

FrequencyEstimate NormalizeDefense(const FrequencyEstimate& estimate) {
  if (estimate.estimates.empty()) {
    throw std::invalid_argument("NormalizeDefense: empty estimate");
  }
  FrequencyEstimate result = estimate;
  double min_value = result.estimates[0];
  for (const double value : result.estimates) {
    min_value = std::min(min_value, value);
  }
  double sum = 0.0;
  for (double& value : result.estimates) {
    value -= min_value;
    sum += value;
  }
  if (sum <= 0.0) {
    const double uniform = 1.0 / static_cast<double>(result.estimates.size());
    for (double& value : result.estimates) value = uniform;
    return result;
  }
  for (double& value : result.estimates) value /= sum;
  return result;
}

WangDefended WangDummyDefense(const std::vector<int32_t>& messages, double a,
                              int32_t range, Rng& rng) {
  if (a < 0.0) throw std::domain_error("WangDummyDefense: a must be >= 0");
  if (range < 1) throw std::domain_error("WangDummyDefense: empty range");
  WangDefended defended;
  defended.messages = messages;
  defended.dummy_count = static_cast<int64_t>(
      std::floor(a * static_cast<double>(messages.size())));
  for (int64_t i = 0; i < defended.dummy_count; ++i) {
    defended.messages.push_back(
        static_cast<int32_t>(rng.UniformIndex(static_cast<uint64_t>(range))) +
        1);
  }
  return defended;
}

FrequencyEstimate GrrEstimateWithDummies(const std::vector<int32_t>& messages,
                                         int64_t n_population,
                                         int64_t dummy_count, double eps_l,
                                         int32_t d) {
  FrequencyEstimate estimate;
  estimate.population = n_population;
  estimate.estimates.assign(static_cast<size_t>(d), 0.0);
  const double e_l = std::exp(eps_l);
  const double p = e_l / (e_l + static_cast<double>(d) - 1.0);
  const double q = 1.0 / (e_l + static_cast<double>(d) - 1.0);
  std::vector<int64_t> counts(static_cast<size_t>(d), 0);
  for (const int32_t item : messages) ++counts[static_cast<size_t>(item - 1)];
  const double n = static_cast<double>(n_population);
  const double dummy_mean =
      static_cast<double>(dummy_count) / static_cast<double>(d);
  for (int32_t j = 0; j < d; ++j) {
    estimate.estimates[static_cast<size_t>(j)] =
        ((static_cast<double>(counts[static_cast<size_t>(j)]) - dummy_mean) /
             n -
         q) /
        (p - q);
  }
  return estimate;
}

}  // namespace augshuffle
