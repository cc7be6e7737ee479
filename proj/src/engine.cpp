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

#include "augshuffle/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace augshuffle {

std::vector<int64_t> Dataset::Counts() const {
  std::vector<int64_t> counts(static_cast<size_t>(d), 0);
  for (const int32_t value : values) ++counts[static_cast<size_t>(value - 1)];
  return counts;
}

std::vector<double> Dataset::TrueFrequencies() const {
  const std::vector<int64_t> counts = Counts();
  std::vector<double> frequencies(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    frequencies[i] =
        static_cast<double>(counts[i]) / static_cast<double>(values.size());
  }
  return frequencies;
}

Dataset Dataset::FromValues(std::vector<int32_t> values, int32_t d) {
  if (d < 1) throw std::invalid_argument("Dataset: d must be >= 1");
  if (values.empty()) throw std::invalid_argument("Dataset: needs >= 1 value");
  for (const int32_t value : values) {
    if (value < 1 || value > d) {
      throw std::invalid_argument("Dataset: value " + std::to_string(value) +
                                  " outside [1, " + std::to_string(d) + "]");
    }
  }
  Dataset dataset;
  dataset.d = d;
  dataset.values = std::move(values);
  return dataset;
}

int64_t NoisyHistogram::Total() const {
  int64_t total = 0;
  for (const int64_t count : counts) total += count;
  return total;
}

std::vector<uint8_t> SampleKeepMask(int64_t n, double beta, Rng& rng) {
  std::vector<uint8_t> keep(static_cast<size_t>(n));
  for (auto& flag : keep) flag = rng.Bernoulli(beta) ? 1 : 0;
  return keep;
}

std::vector<int64_t> SampleDummyCounts(const DummyCountDistribution& dist,
                                       int32_t d, Rng& rng) {
  std::vector<int64_t> dummies(static_cast<size_t>(d));
  for (auto& z : dummies) z = dist.Sample(rng);
  return dummies;
}

NoisyHistogram BuildHistogram(const Dataset& dataset,
                              const std::vector<uint8_t>& keep,
                              const std::vector<int64_t>& dummies) {
  NoisyHistogram histogram;
  histogram.counts.assign(static_cast<size_t>(dataset.d), 0);
  for (size_t i = 0; i < dataset.values.size(); ++i) {
    if (keep[i]) ++histogram.counts[static_cast<size_t>(dataset.values[i] - 1)];
  }
  for (size_t item = 0; item < dummies.size(); ++item) {
    histogram.counts[item] += dummies[item];
  }
  return histogram;
}

ShuffledReport BuildReport(const Dataset& dataset,
                           const std::vector<uint8_t>& keep,
                           const std::vector<int64_t>& dummies,
                           Rng& shuffle_rng) {
  ShuffledReport report;
  for (size_t i = 0; i < dataset.values.size(); ++i) {
    if (keep[i]) report.values.push_back(dataset.values[i]);
  }
  for (size_t item = 0; item < dummies.size(); ++item) {
    for (int64_t j = 0; j < dummies[item]; ++j) {
      report.values.push_back(static_cast<int32_t>(item + 1));
    }
  }
  FisherYatesShuffle(report.values, shuffle_rng);
  return report;
}

NoisyHistogram HistogramOfReport(const ShuffledReport& report, int32_t d) {
  NoisyHistogram histogram;
  histogram.counts.assign(static_cast<size_t>(d), 0);
  for (const int32_t value : report.values) {
    if (value < 1 || value > d) {
      throw std::invalid_argument("HistogramOfReport: value out of range");
    }
    ++histogram.counts[static_cast<size_t>(value - 1)];
  }
  return histogram;
}

ShuffledReport AugmentedShuffle(const Dataset& dataset,
                                const DummyCountDistribution& dist, double beta,
                                const SeedSchedule& seeds) {
  Rng keep_rng = seeds.Stream(kStreamKeep);
  Rng dummy_rng = seeds.Stream(kStreamDummy);
  Rng shuffle_rng = seeds.Stream(kStreamShuffle);
  const auto keep = SampleKeepMask(dataset.n(), beta, keep_rng);
  const auto dummies = SampleDummyCounts(dist, dataset.d, dummy_rng);
  return BuildReport(dataset, keep, dummies, shuffle_rng);
}

NoisyHistogram NoisyHistogramOf(const Dataset& dataset,
                                const DummyCountDistribution& dist, double beta,
                                const SeedSchedule& seeds) {
  Rng keep_rng = seeds.Stream(kStreamKeep);
  Rng dummy_rng = seeds.Stream(kStreamDummy);
  const auto keep = SampleKeepMask(dataset.n(), beta, keep_rng);
  const auto dummies = SampleDummyCounts(dist, dataset.d, dummy_rng);
  return BuildHistogram(dataset, keep, dummies);
}

FrequencyEstimate Analyze(const NoisyHistogram& histogram, int64_t n,
                          double beta, double mu, int32_t d) {
  if (!(beta > 0.0)) {
    throw std::domain_error("Analyze: beta must be positive");
  }
  if (n < 1) throw std::domain_error("Analyze: n must be >= 1");
  if (static_cast<int32_t>(histogram.counts.size()) != d) {
    throw std::invalid_argument("Analyze: histogram size mismatch");
  }
  FrequencyEstimate estimate;
  estimate.population = n;
  estimate.beta = beta;
  estimate.mu = mu;
  estimate.estimates.resize(static_cast<size_t>(d));
  const double denominator = static_cast<double>(n) * beta;
  for (size_t i = 0; i < estimate.estimates.size(); ++i) {
    estimate.estimates[i] =
        (static_cast<double>(histogram.counts[i]) - mu) / denominator;
  }
  return estimate;
}

ResolvedProtocol ResolveProtocol(ProtocolKind kind,
                                 const ProtocolConfig& config) {
  ResolvedProtocol protocol;
  protocol.kind = kind;
  switch (kind) {
    case ProtocolKind::kSBin: {
      const SbinParams params =
          ResolveSbin(config.epsilon, config.delta, config.beta);
      protocol.beta = params.beta;
      auto dist = std::make_shared<BinomialDist>(params.trials);
      protocol.mu = dist->Mean();
      protocol.sigma2 = dist->Variance();
      protocol.dist = std::move(dist);
      return protocol;
    }
    case ProtocolKind::kSAGeo: {
      const SageoParams params =
          ResolveSageo(config.epsilon, config.beta, config.delta);
      protocol.beta = params.beta;
      if (params.q_l == 0.0) {
        auto dist = std::make_shared<OneSidedGeoDist>(params.q_r);
        protocol.mu = dist->Mean();
        protocol.sigma2 = dist->Variance();
        protocol.dist = std::move(dist);
      } else {
        auto dist =
            std::make_shared<AGeoDist>(params.mode, params.q_l, params.q_r);
        protocol.mu = dist->Mean();
        protocol.sigma2 = dist->Variance();
        protocol.dist = std::move(dist);
      }
      return protocol;
    }
    case ProtocolKind::kS1Geo: {
      const SageoParams params = ResolveS1geo(config.epsilon);
      protocol.beta = params.beta;
      auto dist = std::make_shared<OneSidedGeoDist>(params.q_r);
      protocol.mu = dist->Mean();
      protocol.sigma2 = dist->Variance();
      protocol.dist = std::move(dist);
      return protocol;
    }
    default:
      throw std::invalid_argument(
          "ResolveProtocol: not a local-noise-free protocol: " +
          ProtocolName(kind));
  }
}

FrequencyEstimate RunProtocol(const ResolvedProtocol& protocol,
                              const Dataset& dataset, uint64_t seed) {
  const SeedSchedule seeds{seed};
  const NoisyHistogram histogram =
      NoisyHistogramOf(dataset, *protocol.dist, protocol.beta, seeds);
  return Analyze(histogram, dataset.n(), protocol.beta, protocol.mu, dataset.d);
}

FrequencyEstimate RunProtocol(ProtocolKind kind, const ProtocolConfig& config,
                              const Dataset& dataset, uint64_t seed) {
  return RunProtocol(ResolveProtocol(kind, config), dataset, seed);
}

double ExpectedL2Loss(const ResolvedProtocol& protocol, int64_t n, int32_t d) {
  const double nn = static_cast<double>(n);
  const double beta = protocol.beta;
  return (1.0 - beta) / (beta * nn) +
         protocol.sigma2 * static_cast<double>(d) / (beta * beta * nn * nn);
}

std::pair<FrequencyEstimate, MessageCounts> PipelineWithCipher(
    const Dataset& dataset, const ResolvedProtocol& protocol,
    const Cipher& cipher, uint64_t seed) {
  const SeedSchedule seeds{seed};
  Rng keep_rng = seeds.Stream(kStreamKeep);
  Rng dummy_rng = seeds.Stream(kStreamDummy);
  Rng shuffle_rng = seeds.Stream(kStreamShuffle);

  // Users encrypt; the shuffler only ever sees blobs.
  std::vector<uint64_t> blobs;
  blobs.reserve(dataset.values.size());
  for (const int32_t value : dataset.values) {
    blobs.push_back(cipher.Encrypt(value));
  }
  MessageCounts counts;
  counts.users_to_shuffler = static_cast<int64_t>(blobs.size());

  const auto keep = SampleKeepMask(dataset.n(), protocol.beta, keep_rng);
  std::vector<uint64_t> outgoing;
  for (size_t i = 0; i < blobs.size(); ++i) {
    if (keep[i]) outgoing.push_back(blobs[i]);
  }
  const auto dummies = SampleDummyCounts(*protocol.dist, dataset.d, dummy_rng);
  for (size_t item = 0; item < dummies.size(); ++item) {
    for (int64_t j = 0; j < dummies[item]; ++j) {
      outgoing.push_back(cipher.Encrypt(static_cast<int32_t>(item + 1)));
    }
  }
  FisherYatesShuffle(outgoing, shuffle_rng);
  counts.shuffler_to_collector = static_cast<int64_t>(outgoing.size());

  // Collector decrypts and analyzes.
  NoisyHistogram histogram;
  histogram.counts.assign(static_cast<size_t>(dataset.d), 0);
  for (const uint64_t blob : outgoing) {
    const int32_t value = cipher.Decrypt(blob);
    if (value < 1 || value > dataset.d) {
      throw std::runtime_error("PipelineWithCipher: decryption mismatch");
    }
    ++histogram.counts[static_cast<size_t>(value - 1)];
  }
  return {Analyze(histogram, dataset.n(), protocol.beta, protocol.mu, dataset.d),
          counts};
}

}  // namespace augshuffle
