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

#include "augshuffle/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "augshuffle/accountant.hpp"

namespace augshuffle {
namespace {

// The populated container must match the declared kind.
void CheckMessageShape(const BaselineMessages& messages) {
  const bool wants_items = messages.kind == ProtocolKind::kGrrShuffle;
  const bool wants_bits = messages.kind == ProtocolKind::kOueShuffle ||
                          messages.kind == ProtocolKind::kRapporShuffle;
  const bool wants_olh = messages.kind == ProtocolKind::kOlhShuffle;
  if ((wants_items && messages.items.empty()) ||
      (wants_bits && messages.bits.empty()) ||
      (wants_olh && messages.olh.empty()) ||
      (!wants_items && !messages.items.empty()) ||
      (!wants_bits && !messages.bits.empty()) ||
      (!wants_olh && !messages.olh.empty())) {
    throw std::invalid_argument("EmpiricalEstimate: message shape mismatch");
  }
}

}  // namespace

int32_t GrrRandomize(int32_t x, double eps_l, int32_t d, Rng& rng) {
  if (d < 2) throw std::domain_error("GrrRandomize: d must be >= 2");
  const double e_l = std::exp(eps_l);
  const double p_true = e_l / (e_l + static_cast<double>(d) - 1.0);
  if (rng.Bernoulli(p_true)) return x;
  const int32_t other =
      static_cast<int32_t>(rng.UniformIndex(static_cast<uint64_t>(d - 1))) + 1;
  return other < x ? other : other + 1;
}

void OueRandomize(int32_t x, double eps_l, int32_t d, Rng& rng,
                  std::vector<uint8_t>* out) {
  if (d < 2) throw std::domain_error("OueRandomize: d must be >= 2");
  const double q = 1.0 / (std::exp(eps_l) + 1.0);
  out->assign(static_cast<size_t>(d), 0);
  for (int32_t j = 0; j < d; ++j) {
    const double p_one = (j + 1 == x) ? 0.5 : q;
    (*out)[static_cast<size_t>(j)] = rng.Bernoulli(p_one) ? 1 : 0;
  }
}

void RapporRandomize(int32_t x, double eps_l, int32_t d, Rng& rng,
                     std::vector<uint8_t>* out) {
  if (d < 2) throw std::domain_error("RapporRandomize: d must be >= 2");
  const double q = 1.0 / (std::exp(eps_l / 2.0) + 1.0);
  out->assign(static_cast<size_t>(d), 0);
  for (int32_t j = 0; j < d; ++j) {
    const double p_one = (j + 1 == x) ? 1.0 - q : q;
    (*out)[static_cast<size_t>(j)] = rng.Bernoulli(p_one) ? 1 : 0;
  }
}

int32_t OlhHashRange(double eps_l) {
  return static_cast<int32_t>(std::ceil(std::exp(eps_l))) + 1;
}

int32_t OlhHash(uint64_t hash_seed, int32_t item, int32_t range) {
  uint64_t state =
      hash_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(item));
  return static_cast<int32_t>(SplitMix64Next(state) %
                              static_cast<uint64_t>(range));
}

OlhMessage OlhRandomize(int32_t x, double eps_l, int32_t d, Rng& rng) {
  if (d < 2) throw std::domain_error("OlhRandomize: d must be >= 2");
  const int32_t range = OlhHashRange(eps_l);
  OlhMessage message;
  message.hash_seed = rng.NextU64();
  const int32_t hashed = OlhHash(message.hash_seed, x, range);
  const double e_l = std::exp(eps_l);
  const double p_true = e_l / (e_l + static_cast<double>(range) - 1.0);
  if (rng.Bernoulli(p_true)) {
    message.value = hashed;
  } else {
    const int32_t other = static_cast<int32_t>(
        rng.UniformIndex(static_cast<uint64_t>(range - 1)));
    message.value = other < hashed ? other : other + 1;
  }
  return message;
}

BaselineMessages RandomizeAll(ProtocolKind kind, const Dataset& dataset,
                              double eps_l, Rng& rng) {
  BaselineMessages messages;
  messages.kind = kind;
  switch (kind) {
    case ProtocolKind::kGrrShuffle:
      messages.items.reserve(dataset.values.size());
      for (const int32_t x : dataset.values) {
        messages.items.push_back(GrrRandomize(x, eps_l, dataset.d, rng));
      }
      break;
    case ProtocolKind::kOueShuffle:
      messages.bits.resize(dataset.values.size());
      for (size_t i = 0; i < dataset.values.size(); ++i) {
        OueRandomize(dataset.values[i], eps_l, dataset.d, rng,
                     &messages.bits[i]);
      }
      break;
    case ProtocolKind::kRapporShuffle:
      messages.bits.resize(dataset.values.size());
      for (size_t i = 0; i < dataset.values.size(); ++i) {
        RapporRandomize(dataset.values[i], eps_l, dataset.d, rng,
                        &messages.bits[i]);
      }
      break;
    case ProtocolKind::kOlhShuffle:
      messages.olh.reserve(dataset.values.size());
      for (const int32_t x : dataset.values) {
        messages.olh.push_back(OlhRandomize(x, eps_l, dataset.d, rng));
      }
      break;
    default:
      throw std::invalid_argument("RandomizeAll: not a single-message kind");
  }
  return messages;
}

FrequencyEstimate EmpiricalEstimate(const BaselineMessages& messages,
                                    int64_t n_population, double eps_l,
                                    int32_t d) {
  CheckMessageShape(messages);
  if (n_population < 1) {
    throw std::invalid_argument("EmpiricalEstimate: population must be >= 1");
  }
  FrequencyEstimate estimate;
  estimate.population = n_population;
  estimate.estimates.assign(static_cast<size_t>(d), 0.0);
  const double n = static_cast<double>(n_population);
  switch (messages.kind) {
    case ProtocolKind::kGrrShuffle: {
      const double e_l = std::exp(eps_l);
      const double p = e_l / (e_l + static_cast<double>(d) - 1.0);
      const double q = 1.0 / (e_l + static_cast<double>(d) - 1.0);
      std::vector<int64_t> counts(static_cast<size_t>(d), 0);
      for (const int32_t item : messages.items) {
        ++counts[static_cast<size_t>(item - 1)];
      }
      for (int32_t j = 0; j < d; ++j) {
        estimate.estimates[static_cast<size_t>(j)] =
            (static_cast<double>(counts[static_cast<size_t>(j)]) / n - q) /
            (p - q);
      }
      return estimate;
    }
    case ProtocolKind::kOueShuffle:
    case ProtocolKind::kRapporShuffle: {
      const bool oue = messages.kind == ProtocolKind::kOueShuffle;
      const double q = oue ? 1.0 / (std::exp(eps_l) + 1.0)
                           : 1.0 / (std::exp(eps_l / 2.0) + 1.0);
      const double gain = oue ? 0.5 - q : 1.0 - 2.0 * q;
      std::vector<int64_t> column_sums(static_cast<size_t>(d), 0);
      for (const auto& bits : messages.bits) {
        if (static_cast<int32_t>(bits.size()) != d) {
          throw std::invalid_argument("EmpiricalEstimate: bit vector size");
        }
        for (int32_t j = 0; j < d; ++j) {
          column_sums[static_cast<size_t>(j)] += bits[static_cast<size_t>(j)];
        }
      }
      for (int32_t j = 0; j < d; ++j) {
        estimate.estimates[static_cast<size_t>(j)] =
            (static_cast<double>(column_sums[static_cast<size_t>(j)]) / n - q) /
            gain;
      }
      return estimate;
    }
    case ProtocolKind::kOlhShuffle: {
      const int32_t range = OlhHashRange(eps_l);
      const double e_l = std::exp(eps_l);
      const double p = e_l / (e_l + static_cast<double>(range) - 1.0);
      const double q = 1.0 / static_cast<double>(range);
      std::vector<int64_t> support(static_cast<size_t>(d), 0);
      for (const OlhMessage& message : messages.olh) {
        for (int32_t j = 0; j < d; ++j) {
          if (OlhHash(message.hash_seed, j + 1, range) == message.value) {
            ++support[static_cast<size_t>(j)];
          }
        }
      }
      for (int32_t j = 0; j < d; ++j) {
        estimate.estimates[static_cast<size_t>(j)] =
            (static_cast<double>(support[static_cast<size_t>(j)]) / n - q) /
            (p - q);
      }
      return estimate;
    }
    default:
      throw std::invalid_argument("EmpiricalEstimate: unsupported kind");
  }
}

MultiMessageReport Bc20Round(const Dataset& dataset, double q1, Rng& rng) {
  MultiMessageReport report;
  report.kind = ProtocolKind::kBc20;
  for (const int32_t x : dataset.values) {
    report.values.push_back(x);
    for (int32_t item = 1; item <= dataset.d; ++item) {
      if (rng.Bernoulli(q1)) report.values.push_back(item);
    }
  }
  report.message_count = static_cast<int64_t>(report.values.size());
  return report;
}

MultiMessageReport Cm22Round(const Dataset& dataset, double q2, int64_t xi,
                             Rng& rng) {
  MultiMessageReport report;
  report.kind = ProtocolKind::kCm22;
  report.vectors.reserve(dataset.values.size() * (static_cast<size_t>(xi) + 1));
  std::vector<uint8_t> vec(static_cast<size_t>(dataset.d));
  for (const int32_t x : dataset.values) {
    for (int32_t j = 0; j < dataset.d; ++j) {
      const double p_one = (j + 1 == x) ? 1.0 - q2 : q2;
      vec[static_cast<size_t>(j)] = rng.Bernoulli(p_one) ? 1 : 0;
    }
    report.vectors.push_back(vec);
    for (int64_t k = 0; k < xi; ++k) {
      for (int32_t j = 0; j < dataset.d; ++j) {
        vec[static_cast<size_t>(j)] = rng.Bernoulli(q2) ? 1 : 0;
      }
      report.vectors.push_back(vec);
    }
  }
  report.message_count = static_cast<int64_t>(report.vectors.size());
  return report;
}

MultiMessageReport Lwy22Round(const Dataset& dataset, double q3, Rng& rng) {
  MultiMessageReport report;
  report.kind = ProtocolKind::kLwy22;
  for (const int32_t x : dataset.values) {
    report.values.push_back(x);
    if (rng.Bernoulli(q3)) {
      report.values.push_back(static_cast<int32_t>(rng.UniformIndex(
                                  static_cast<uint64_t>(dataset.d))) +
                              1);
    }
  }
  report.message_count = static_cast<int64_t>(report.values.size());
  return report;
}

FrequencyEstimate MultiMessageEstimate(const MultiMessageReport& report,
                                       int64_t n_population,
                                       const MultiMessageParams& params,
                                       int32_t d) {
  if (n_population < 1) {
    throw std::invalid_argument("MultiMessageEstimate: population must be >= 1");
  }
  FrequencyEstimate estimate;
  estimate.population = n_population;
  estimate.estimates.assign(static_cast<size_t>(d), 0.0);
  const double n = static_cast<double>(n_population);
  switch (report.kind) {
    case ProtocolKind::kBc20:
    case ProtocolKind::kLwy22: {
      std::vector<int64_t> counts(static_cast<size_t>(d), 0);
      for (const int32_t item : report.values) {
        ++counts[static_cast<size_t>(item - 1)];
      }
      const double offset = report.kind == ProtocolKind::kBc20
                                ? params.q1
                                : params.q3 / static_cast<double>(d);
      for (int32_t j = 0; j < d; ++j) {
        estimate.estimates[static_cast<size_t>(j)] =
            static_cast<double>(counts[static_cast<size_t>(j)]) / n - offset;
      }
      return estimate;
    }
    case ProtocolKind::kCm22: {
      std::vector<int64_t> column_sums(static_cast<size_t>(d), 0);
      for (const auto& bits : report.vectors) {
        for (int32_t j = 0; j < d; ++j) {
          column_sums[static_cast<size_t>(j)] += bits[static_cast<size_t>(j)];
        }
      }
      const double q2 = params.q2;
      const double xi = static_cast<double>(params.xi);
      for (int32_t j = 0; j < d; ++j) {
        estimate.estimates[static_cast<size_t>(j)] =
            (static_cast<double>(column_sums[static_cast<size_t>(j)]) -
             n * (xi + 1.0) * q2) /
            (n * (1.0 - 2.0 * q2));
      }
      return estimate;
    }
    default:
      throw std::invalid_argument("MultiMessageEstimate: unsupported kind");
  }
}

double GrrLocalL2(double eps_l, int64_t n, int32_t d) {
  const double e_l = std::exp(eps_l);
  const double dd = static_cast<double>(d);
  return dd * (e_l + dd - 2.0) /
         (static_cast<double>(n) * (e_l - 1.0) * (e_l - 1.0));
}

double OueLocalL2(double eps_l, int64_t n, int32_t d) {
  const double e_l = std::exp(eps_l);
  return 4.0 * static_cast<double>(d) * e_l /
         (static_cast<double>(n) * (e_l - 1.0) * (e_l - 1.0));
}

double RapporLocalL2(double eps_l, int64_t n, int32_t d) {
  const double e_h = std::exp(eps_l / 2.0);
  return static_cast<double>(d) * e_h /
         (static_cast<double>(n) * (e_h - 1.0) * (e_h - 1.0));
}

double BaselineExpectedL2(ProtocolKind kind, double eps, double delta,
                          int64_t n, int32_t d) {
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  switch (kind) {
    case ProtocolKind::kSBin:
    case ProtocolKind::kSAGeo:
    case ProtocolKind::kS1Geo: {
      ProtocolConfig config;
      config.epsilon = eps;
      config.delta = delta;
      return ExpectedL2Loss(ResolveProtocol(kind, config), n, d);
    }
    case ProtocolKind::kGrrShuffle: {
      const double eps_l = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                   eps, n, d, delta);
      return GrrLocalL2(eps_l, n, d);
    }
    case ProtocolKind::kOueShuffle:
    case ProtocolKind::kOlhShuffle: {
      const double eps_l = InvertAmplificationEpsL(
          AmplificationBoundKind::kGeneral, eps, n, d, delta);
      return OueLocalL2(eps_l, n, d);
    }
    case ProtocolKind::kRapporShuffle: {
      const double eps_l = InvertAmplificationEpsL(
          AmplificationBoundKind::kGeneral, eps, n, d, delta);
      return RapporLocalL2(eps_l, n, d);
    }
    case ProtocolKind::kBc20: {
      const double q1 = Bc20DummyProb(eps, delta, n);
      return dd * q1 * (1.0 - q1) / nn;
    }
    case ProtocolKind::kCm22: {
      const Cm22Params params = Cm22ParamsFor(eps, delta, n);
      const double spread = 1.0 - 2.0 * params.q2;
      return dd * static_cast<double>(params.xi + 1) * params.q2 *
             (1.0 - params.q2) / (nn * spread * spread);
    }
    case ProtocolKind::kLwy22: {
      const double q3 = Lwy22DummyProb(eps, delta, n, d);
      return q3 * (1.0 - q3 / dd) / nn;
    }
  }
  throw std::invalid_argument("BaselineExpectedL2: unknown kind");
}

}  // namespace augshuffle
