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

#include "augshuffle/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "augshuffle/accountant.hpp"
#include "augshuffle/defenses.hpp"
#include "augshuffle/stats.hpp"

namespace augshuffle {
namespace {

constexpr uint64_t kStreamClean = 101;
constexpr uint64_t kStreamPoisoned = 102;
constexpr uint64_t kStreamAttack = 103;

int32_t UniformTarget(const std::vector<int32_t>& targets, Rng& rng) {
  return targets[rng.UniformIndex(targets.size())];
}

// Uniform k-subset of [1, d].
std::vector<int32_t> SampleTargets(int32_t target_count, int32_t d, Rng& rng) {
  std::vector<int32_t> pool(static_cast<size_t>(d));
  for (int32_t i = 0; i < d; ++i) pool[static_cast<size_t>(i)] = i + 1;
  for (int32_t i = 0; i < target_count; ++i) {
    const auto j = static_cast<size_t>(
        rng.UniformIndex(static_cast<uint64_t>(d - i)) + static_cast<uint64_t>(i));
    std::swap(pool[static_cast<size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<size_t>(target_count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

int64_t AttackSpec::FakeCount(int64_t n) const {
  if (lambda <= 0.0) return 0;
  const int64_t count = static_cast<int64_t>(
      std::llround(lambda * static_cast<double>(n) / (1.0 - lambda)));
  return std::max<int64_t>(count, 1);
}

AttackSpec MakeAttackSpec(double lambda, int32_t target_count, int32_t d,
                          uint64_t seed) {
  if (lambda < 0.0 || lambda >= 1.0) {
    throw std::domain_error("MakeAttackSpec: lambda must lie in [0, 1)");
  }
  if (target_count < 1 || target_count > d) {
    throw std::domain_error("MakeAttackSpec: target count must lie in [1, d]");
  }
  AttackSpec spec;
  spec.lambda = lambda;
  spec.seed = seed;
  Rng rng(seed);
  spec.targets = SampleTargets(target_count, d, rng);
  return spec;
}

FakeMessages MgaFakeMessages(ProtocolKind kind, const AttackSpec& spec,
                             const AttackParams& params, int32_t d, int64_t n,
                             Rng& rng) {
  if (spec.targets.empty()) {
    throw std::invalid_argument("MgaFakeMessages: empty target set");
  }
  const int64_t fakes = spec.FakeCount(n);
  FakeMessages messages;
  switch (kind) {
    case ProtocolKind::kSBin:
    case ProtocolKind::kSAGeo:
    case ProtocolKind::kS1Geo:
      // No local noise to exploit: the best a fake user can do is submit a
      // target item like any genuine user would.
      for (int64_t i = 0; i < fakes; ++i) {
        messages.items.push_back(UniformTarget(spec.targets, rng));
      }
      messages.message_count = fakes;
      return messages;
    case ProtocolKind::kGrrShuffle:
      for (int64_t i = 0; i < fakes; ++i) {
        messages.items.push_back(UniformTarget(spec.targets, rng));
      }
      messages.message_count = fakes;
      return messages;
    case ProtocolKind::kOueShuffle:
    case ProtocolKind::kRapporShuffle: {
      const double q = kind == ProtocolKind::kOueShuffle
                           ? 1.0 / (std::exp(params.eps_l) + 1.0)
                           : 1.0 / (std::exp(params.eps_l / 2.0) + 1.0);
      std::vector<uint8_t> vec(static_cast<size_t>(d));
      for (int64_t i = 0; i < fakes; ++i) {
        for (int32_t j = 0; j < d; ++j) {
          vec[static_cast<size_t>(j)] = rng.Bernoulli(q) ? 1 : 0;
        }
        for (const int32_t target : spec.targets) {
          vec[static_cast<size_t>(target - 1)] = 1;
        }
        messages.bits.push_back(vec);
      }
      messages.message_count = fakes;
      return messages;
    }
    case ProtocolKind::kOlhShuffle: {
      const int32_t range = OlhHashRange(params.eps_l);
      for (int64_t i = 0; i < fakes; ++i) {
        // Search for a seed that maps every target into one bucket.
        OlhMessage best;
        size_t best_cover = 0;
        for (int attempt = 0; attempt < 4096 && best_cover < spec.targets.size();
             ++attempt) {
          const uint64_t seed = rng.NextU64();
          std::vector<int32_t> buckets(static_cast<size_t>(range), 0);
          for (const int32_t target : spec.targets) {
            ++buckets[static_cast<size_t>(OlhHash(seed, target, range))];
          }
          for (int32_t b = 0; b < range; ++b) {
            const auto cover = static_cast<size_t>(buckets[static_cast<size_t>(b)]);
            if (cover > best_cover) {
              best_cover = cover;
              best.hash_seed = seed;
              best.value = b;
            }
          }
        }
        messages.olh.push_back(best);
      }
      messages.message_count = fakes;
      return messages;
    }
    case ProtocolKind::kBc20: {
      int64_t count = 0;
      for (int64_t i = 0; i < fakes; ++i) {
        messages.items.push_back(UniformTarget(spec.targets, rng));
        ++count;
        for (const int32_t target : spec.targets) {
          messages.items.push_back(target);
          ++count;
        }
        for (int32_t item = 1; item <= d; ++item) {
          if (std::find(spec.targets.begin(), spec.targets.end(), item) !=
              spec.targets.end()) {
            continue;
          }
          if (rng.Bernoulli(params.multi.q1)) {
            messages.items.push_back(item);
            ++count;
          }
        }
      }
      messages.message_count = count;
      return messages;
    }
    case ProtocolKind::kCm22: {
      const double q2 = params.multi.q2;
      const int64_t extra_ones = std::max<int64_t>(
          0, static_cast<int64_t>(std::floor(static_cast<double>(d) * q2)) -
                 static_cast<int64_t>(spec.targets.size()));
      std::vector<int32_t> non_targets;
      for (int32_t item = 1; item <= d; ++item) {
        if (std::find(spec.targets.begin(), spec.targets.end(), item) ==
            spec.targets.end()) {
          non_targets.push_back(item);
        }
      }
      std::vector<uint8_t> vec(static_cast<size_t>(d));
      for (int64_t i = 0; i < fakes; ++i) {
        // First vector: every target plus enough camouflage ones to match the
        // expected 1-count d*q2 of an honest vector.
        std::fill(vec.begin(), vec.end(), 0);
        for (const int32_t target : spec.targets) {
          vec[static_cast<size_t>(target - 1)] = 1;
        }
        FisherYatesShuffle(non_targets, rng);
        for (int64_t k = 0; k < extra_ones && k < static_cast<int64_t>(
                                                      non_targets.size());
             ++k) {
          vec[static_cast<size_t>(non_targets[static_cast<size_t>(k)] - 1)] = 1;
        }
        messages.bits.push_back(vec);
        // Remaining xi vectors behave like honest dummies.
        for (int64_t k = 0; k < params.multi.xi; ++k) {
          for (int32_t j = 0; j < d; ++j) {
            vec[static_cast<size_t>(j)] = rng.Bernoulli(q2) ? 1 : 0;
          }
          messages.bits.push_back(vec);
        }
      }
      messages.message_count = static_cast<int64_t>(messages.bits.size());
      return messages;
    }
    case ProtocolKind::kLwy22: {
      int64_t count = 0;
      for (int64_t i = 0; i < fakes; ++i) {
        messages.items.push_back(UniformTarget(spec.targets, rng));
        ++count;
        if (rng.Bernoulli(params.multi.q3)) {
          messages.items.push_back(UniformTarget(spec.targets, rng));
          ++count;
        }
      }
      messages.message_count = count;
      return messages;
    }
  }
  throw std::invalid_argument("MgaFakeMessages: unknown kind");
}

namespace {

FrequencyEstimate ApplyDefense(const FrequencyEstimate& estimate,
                               const DefenseOptions& defense,
                               double variance_per_item) {
  FrequencyEstimate result = estimate;
  if (defense.significance_threshold) {
    result = SignificanceThreshold(result, variance_per_item, defense.alpha_sig);
  }
  if (defense.normalize) {
    result = NormalizeDefense(result);
  }
  return result;
}

double TargetSum(const FrequencyEstimate& estimate,
                 const std::vector<int32_t>& targets) {
  double sum = 0.0;
  for (const int32_t target : targets) {
    sum += estimate.estimates[static_cast<size_t>(target - 1)];
  }
  return sum;
}

}  // namespace

GainReport MeasureGain(ProtocolKind kind, const ProtocolConfig& config,
                       const Dataset& dataset, const AttackSpec& spec,
                       int runs, uint64_t seed,
                       const DefenseOptions* defense) {
  if (runs < 1) throw std::domain_error("MeasureGain: runs must be >= 1");
  const int64_t n = dataset.n();
  const int64_t fakes = spec.lambda > 0.0 ? spec.FakeCount(n) : 0;
  const int64_t population = n + fakes;
  const int32_t d = dataset.d;

  AttackParams attack_params;
  ResolvedProtocol resolved;
  MultiMessageParams multi;
  if (IsProposed(kind)) {
    resolved = ResolveProtocol(kind, config);
  } else if (kind == ProtocolKind::kGrrShuffle) {
    attack_params.eps_l = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                  config.epsilon, n, d,
                                                  config.delta);
  } else if (IsSingleMessage(kind)) {
    attack_params.eps_l = InvertAmplificationEpsL(
        AmplificationBoundKind::kGeneral, config.epsilon, n, d, config.delta);
  } else if (kind == ProtocolKind::kBc20) {
    multi.q1 = Bc20DummyProb(config.epsilon, config.delta, n);
    attack_params.multi = multi;
  } else if (kind == ProtocolKind::kCm22) {
    const Cm22Params params = Cm22ParamsFor(config.epsilon, config.delta, n);
    multi.q2 = params.q2;
    multi.xi = params.xi;
    attack_params.multi = multi;
  } else {
    multi.q3 = Lwy22DummyProb(config.epsilon, config.delta, n, d);
    attack_params.multi = multi;
  }

  const double variance_per_item =
      defense != nullptr && defense->significance_threshold
          ? BaselineExpectedL2(kind, config.epsilon, config.delta, n, d) /
                static_cast<double>(d)
          : 0.0;

  auto run_once = [&](const Dataset& data, int64_t pop, bool poisoned_arg,
                      uint64_t run_seed, Rng& attack_rng) {
    const bool poisoned = poisoned_arg && fakes > 0;
    FrequencyEstimate estimate;
    if (IsProposed(kind)) {
      Dataset working = data;
      if (poisoned) {
        const FakeMessages fake = MgaFakeMessages(kind, spec, attack_params, d,
                                                  n, attack_rng);
        working.values.insert(working.values.end(), fake.items.begin(),
                              fake.items.end());
      }
      estimate = RunProtocol(resolved, working, run_seed);
    } else if (IsSingleMessage(kind)) {
      Rng rng(run_seed);
      BaselineMessages messages =
          RandomizeAll(kind, data, attack_params.eps_l, rng);
      if (poisoned) {
        const FakeMessages fake = MgaFakeMessages(kind, spec, attack_params, d,
                                                  n, attack_rng);
        messages.items.insert(messages.items.end(), fake.items.begin(),
                              fake.items.end());
        messages.bits.insert(messages.bits.end(), fake.bits.begin(),
                             fake.bits.end());
        messages.olh.insert(messages.olh.end(), fake.olh.begin(),
                            fake.olh.end());
      }
      estimate = EmpiricalEstimate(messages, pop, attack_params.eps_l, d);
    } else {
      Rng rng(run_seed);
      MultiMessageReport report;
      if (kind == ProtocolKind::kBc20) {
        report = Bc20Round(data, multi.q1, rng);
      } else if (kind == ProtocolKind::kCm22) {
        report = Cm22Round(data, multi.q2, multi.xi, rng);
      } else {
        report = Lwy22Round(data, multi.q3, rng);
      }
      if (poisoned) {
        const FakeMessages fake = MgaFakeMessages(kind, spec, attack_params, d,
                                                  n, attack_rng);
        report.values.insert(report.values.end(), fake.items.begin(),
                             fake.items.end());
        report.vectors.insert(report.vectors.end(), fake.bits.begin(),
                              fake.bits.end());
        report.message_count += fake.message_count;
      }
      estimate = MultiMessageEstimate(report, pop, multi, d);
    }
    if (defense != nullptr) {
      estimate = ApplyDefense(estimate, *defense, variance_per_item);
    }
    return estimate;
  };

  RunningStats gain_stats;
  std::vector<RunningStats> per_target(spec.targets.size());
  for (int run = 0; run < runs; ++run) {
    const uint64_t base = DeriveSeed(seed, static_cast<uint64_t>(run));
    Rng attack_rng(DeriveSeed(base, kStreamAttack));
    const FrequencyEstimate clean = run_once(
        dataset, n, /*poisoned=*/false, DeriveSeed(base, kStreamClean),
        attack_rng);
    const FrequencyEstimate poisoned = run_once(
        dataset, population, /*poisoned=*/true, DeriveSeed(base, kStreamPoisoned),
        attack_rng);
    gain_stats.Add(TargetSum(poisoned, spec.targets) -
                   TargetSum(clean, spec.targets));
    for (size_t t = 0; t < spec.targets.size(); ++t) {
      const auto index = static_cast<size_t>(spec.targets[t] - 1);
      per_target[t].Add(poisoned.estimates[index] - clean.estimates[index]);
    }
  }

  const std::vector<double> frequencies = dataset.TrueFrequencies();
  double f_t = 0.0;
  for (const int32_t target : spec.targets) {
    f_t += frequencies[static_cast<size_t>(target - 1)];
  }
  const double lambda_actual =
      static_cast<double>(fakes) / static_cast<double>(population);

  GainReport report;
  report.empirical = gain_stats.mean;
  report.std_err = gain_stats.StdErr();
  report.predicted = PredictedGain(
      kind, lambda_actual, f_t, static_cast<int32_t>(spec.targets.size()), d,
      config.epsilon, config.delta, n);
  report.predicted_is_lower_bound =
      kind == ProtocolKind::kCm22 || kind == ProtocolKind::kLwy22;
  report.per_target.reserve(per_target.size());
  for (const RunningStats& stats : per_target) {
    report.per_target.push_back(stats.mean);
  }
  return report;
}

double PredictedGain(ProtocolKind kind, double lambda, double f_t,
                     int32_t target_count, int32_t d, double eps, double delta,
                     int64_t n) {
  const double t = static_cast<double>(target_count);
  const double dd = static_cast<double>(d);
  switch (kind) {
    case ProtocolKind::kSBin:
    case ProtocolKind::kSAGeo:
    case ProtocolKind::kS1Geo:
      return lambda * (1.0 - f_t);
    case ProtocolKind::kGrrShuffle: {
      const double eps_l = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                   eps, n, d, delta);
      return lambda * (1.0 - f_t) +
             lambda * (dd - t) / (std::exp(eps_l) - 1.0);
    }
    case ProtocolKind::kOueShuffle:
    case ProtocolKind::kOlhShuffle: {
      const double eps_l = InvertAmplificationEpsL(
          AmplificationBoundKind::kGeneral, eps, n, d, delta);
      return lambda * (2.0 * t - f_t) +
             2.0 * lambda * t / (std::exp(eps_l) - 1.0);
    }
    case ProtocolKind::kRapporShuffle: {
      const double eps_l = InvertAmplificationEpsL(
          AmplificationBoundKind::kGeneral, eps, n, d, delta);
      return lambda * (t - f_t) +
             lambda * t / (std::exp(eps_l / 2.0) - 1.0);
    }
    case ProtocolKind::kBc20: {
      const double q1 = Bc20DummyProb(eps, delta, n);
      return lambda * (1.0 - f_t) + lambda * t * (1.0 - q1);
    }
    case ProtocolKind::kCm22:
      return lambda * (t - f_t);  // lower bound
    case ProtocolKind::kLwy22: {
      const double q3 = Lwy22DummyProb(eps, delta, n, d);
      return lambda * (1.0 - f_t) + lambda * q3 * (dd - t) / dd;
    }
  }
  throw std::invalid_argument("PredictedGain: unknown kind");
}

std::vector<double> CollusionScenario(ProtocolKind kind, double target_eps,
                                      int64_t n,
                                      const std::vector<double>& omega_ratios,
                                      double delta, int32_t d) {
  std::vector<double> actual;
  actual.reserve(omega_ratios.size());
  for (const double ratio : omega_ratios) {
    if (ratio < 0.0 || ratio > 1.0 - 1.0 / static_cast<double>(n)) {
      throw std::domain_error(
          "CollusionScenario: ratio must lie in [0, 1 - 1/n]");
    }
    const int64_t omega = std::min<int64_t>(
        n - 1,
        static_cast<int64_t>(std::llround(ratio * static_cast<double>(n))));
    actual.push_back(CollusionEpsilon(kind, target_eps, n, omega, d, delta));
  }
  return actual;
}

}  // namespace augshuffle
