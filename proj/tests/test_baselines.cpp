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
#include <vector>

#include <gtest/gtest.h>

#include "augshuffle/accountant.hpp"
#include "augshuffle/harness.hpp"
#include "augshuffle/stats.hpp"

namespace augshuffle {
namespace {

// Exact randomized-response channel matrix from the mechanism definition.
std::vector<std::vector<double>> GrrChannel(double eps_l, int32_t d) {
  const double e_l = std::exp(eps_l);
  const double p = e_l / (e_l + d - 1.0);
  const double q = (1.0 - p) / (d - 1.0);
  std::vector<std::vector<double>> channel(
      static_cast<size_t>(d), std::vector<double>(static_cast<size_t>(d), q));
  for (int32_t x = 0; x < d; ++x) {
    channel[static_cast<size_t>(x)][static_cast<size_t>(x)] = p;
  }
  return channel;
}

// Exact bit-vector channel: product over per-bit Bernoulli factors.
double BitChannelProb(int32_t x, uint32_t message, int32_t d, double p_true,
                      double p_false) {
  double prob = 1.0;
  for (int32_t j = 0; j < d; ++j) {
    const bool bit = (message >> j) & 1u;
    const double p_one = (j + 1 == x) ? p_true : p_false;
    prob *= bit ? p_one : 1.0 - p_one;
  }
  return prob;
}

double MaxLogRatioBits(int32_t d, double p_true, double p_false) {
  double max_ratio = 0.0;
  for (int32_t x = 1; x <= d; ++x) {
    for (int32_t y = 1; y <= d; ++y) {
      if (x == y) continue;
      for (uint32_t message = 0; message < (1u << d); ++message) {
        const double a = BitChannelProb(x, message, d, p_true, p_false);
        const double b = BitChannelProb(y, message, d, p_true, p_false);
        max_ratio = std::max(max_ratio, std::log(a / b));
      }
    }
  }
  return max_ratio;
}

TEST(LdpCertification, GrrChannelSaturatesBudget) {
  const double eps_l = 1.0;
  const int32_t d = 3;
  const auto channel = GrrChannel(eps_l, d);
  double max_ratio = 0.0;
  for (int32_t x = 0; x < d; ++x) {
    double row_sum = 0.0;
    for (int32_t o = 0; o < d; ++o) {
      row_sum += channel[static_cast<size_t>(x)][static_cast<size_t>(o)];
      for (int32_t y = 0; y < d; ++y) {
        max_ratio = std::max(
            max_ratio,
            std::log(channel[static_cast<size_t>(x)][static_cast<size_t>(o)] /
                     channel[static_cast<size_t>(y)][static_cast<size_t>(o)]));
      }
    }
    EXPECT_NEAR(row_sum, 1.0, 1e-12);
  }
  EXPECT_NEAR(max_ratio, eps_l, 1e-12);
  EXPECT_LE(max_ratio, eps_l + 1e-12);
}

TEST(LdpCertification, ChannelsWithinBudgetUpToTen) {
  for (const double eps_l : {0.5, 1.0, 2.0}) {
    for (const int32_t d : {2, 5, 10}) {
      // Randomized response over items.
      const auto channel = GrrChannel(eps_l, d);
      double max_ratio = 0.0;
      for (int32_t x = 0; x < d; ++x) {
        for (int32_t y = 0; y < d; ++y) {
          for (int32_t o = 0; o < d; ++o) {
            max_ratio = std::max(
                max_ratio,
                std::log(
                    channel[static_cast<size_t>(x)][static_cast<size_t>(o)] /
                    channel[static_cast<size_t>(y)][static_cast<size_t>(o)]));
          }
        }
      }
      EXPECT_LE(max_ratio, eps_l + 1e-12);
      // Unary encoding with asymmetric keep/flip probabilities.
      const double q_oue = 1.0 / (std::exp(eps_l) + 1.0);
      EXPECT_LE(MaxLogRatioBits(d, 0.5, q_oue), eps_l + 1e-12);
      // Symmetric bit flips.
      const double q_sym = 1.0 / (std::exp(eps_l / 2.0) + 1.0);
      EXPECT_LE(MaxLogRatioBits(d, 1.0 - q_sym, q_sym), eps_l + 1e-12);
    }
  }
}

TEST(LdpCertification, HashedResponsePerSeedRatio) {
  const double eps_l = 1.0;
  const int32_t d = 6;
  const int32_t range = OlhHashRange(eps_l);
  const double e_l = std::exp(eps_l);
  const double p = e_l / (e_l + range - 1.0);
  const double q = (1.0 - p) / (range - 1.0);
  Rng rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const uint64_t seed = rng.NextU64();
    for (int32_t v = 0; v < range; ++v) {
      for (int32_t x = 1; x <= d; ++x) {
        for (int32_t y = 1; y <= d; ++y) {
          const double px = OlhHash(seed, x, range) == v ? p : q;
          const double py = OlhHash(seed, y, range) == v ? p : q;
          EXPECT_LE(std::log(px / py), eps_l + 1e-12);
        }
      }
    }
  }
}

TEST(Randomizers, GrrLimits) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(GrrRandomize(3, 40.0, 5, rng), 3);  // overwhelming budget
  }
  // Zero budget: uniform over the domain.
  std::vector<int64_t> counts(4, 0);
  const int64_t draws = 200000;
  for (int64_t i = 0; i < draws; ++i) {
    ++counts[static_cast<size_t>(GrrRandomize(2, 0.0, 4, rng) - 1)];
  }
  for (const int64_t count : counts) {
    const double freq = static_cast<double>(count) / static_cast<double>(draws);
    EXPECT_NEAR(freq, 0.25, 5.0 * std::sqrt(0.25 * 0.75 / draws));
  }
}

TEST(Randomizers, OueLimitAndRapporFlipRate) {
  Rng rng(2);
  std::vector<uint8_t> bits;
  // Unary encoding keeps the true bit with probability exactly 1/2; at an
  // overwhelming budget every other bit is silent, so the message support is
  // contained in the one-hot encoding.
  int64_t true_bit_ones = 0;
  const int64_t trials = 20000;
  for (int64_t i = 0; i < trials; ++i) {
    OueRandomize(4, 50.0, 6, rng, &bits);
    true_bit_ones += bits[3];
    for (int32_t j = 0; j < 6; ++j) {
      if (j != 3) EXPECT_EQ(bits[j], 0);
    }
  }
  EXPECT_NEAR(static_cast<double>(true_bit_ones) / trials, 0.5,
              5.0 * std::sqrt(0.25 / trials));
  // Off-bit rate equals 1/(e^{eps/2}+1) for the symmetric mechanism.
  const double eps_l = 1.0;
  const double q = 1.0 / (std::exp(0.5) + 1.0);
  int64_t ones = 0;
  const int64_t draws = 100000;
  for (int64_t i = 0; i < draws; ++i) {
    RapporRandomize(1, eps_l, 4, rng, &bits);
    ones += bits[2];
  }
  const double freq = static_cast<double>(ones) / static_cast<double>(draws);
  EXPECT_NEAR(freq, q, 5.0 * std::sqrt(q * (1.0 - q) / draws));
}

TEST(Estimators, NoiselessInputsRecoverExactFrequencies) {
  const Dataset dataset = Dataset::FromValues({1, 2, 2, 3, 3, 3}, 3);
  BaselineMessages messages;
  messages.kind = ProtocolKind::kGrrShuffle;
  messages.items = dataset.values;
  // A huge local budget makes p ~ 1, q ~ 0: raw counts over n.
  const FrequencyEstimate estimate =
      EmpiricalEstimate(messages, dataset.n(), 60.0, 3);
  const std::vector<double> truth = dataset.TrueFrequencies();
  for (size_t i = 0; i < truth.size(); ++i) {
    EXPECT_NEAR(estimate.estimates[i], truth[i], 1e-9);
  }
  EXPECT_THROW(EmpiricalEstimate(messages, 0, 1.0, 3), std::invalid_argument);

  // The symmetric-flip debias degenerates to the raw mean at q = 0.
  BaselineMessages raw;
  raw.kind = ProtocolKind::kRapporShuffle;
  raw.bits = {{1, 0, 0}, {0, 1, 0}, {0, 1, 0}};
  const FrequencyEstimate mean =
      EmpiricalEstimate(raw, 3, 1e6, 3);  // q ~ 0 at a huge budget
  EXPECT_NEAR(mean.estimates[0], 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(mean.estimates[1], 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(mean.estimates[2], 0.0, 1e-9);
}

TEST(Estimators, ShapeMismatchThrows) {
  BaselineMessages messages;
  messages.kind = ProtocolKind::kOueShuffle;
  messages.items = {1, 2};  // wrong container for a bit-vector mechanism
  EXPECT_THROW(EmpiricalEstimate(messages, 2, 1.0, 3), std::invalid_argument);
}

TEST(Estimators, MonteCarloUnbiased) {
  const Dataset dataset = SynthZipf(3000, 12, 1.0, 55);
  const std::vector<double> truth = dataset.TrueFrequencies();
  const double eps_l = 1.0;
  for (const ProtocolKind kind :
       {ProtocolKind::kGrrShuffle, ProtocolKind::kOueShuffle,
        ProtocolKind::kOlhShuffle, ProtocolKind::kRapporShuffle}) {
    const int runs = 600;
    std::vector<RunningStats> per_item(truth.size());
    Rng rng(DeriveSeed(kind == ProtocolKind::kGrrShuffle ? 11 : 12,
                       static_cast<uint64_t>(kind)));
    for (int run = 0; run < runs; ++run) {
      const BaselineMessages messages =
          RandomizeAll(kind, dataset, eps_l, rng);
      const FrequencyEstimate estimate =
          EmpiricalEstimate(messages, dataset.n(), eps_l, dataset.d);
      for (size_t i = 0; i < truth.size(); ++i) {
        per_item[i].Add(estimate.estimates[i]);
      }
    }
    for (size_t i = 0; i < truth.size(); ++i) {
      const double band = 4.0 * per_item[i].StdErr();
      EXPECT_NEAR(per_item[i].mean, truth[i], std::max(band, 1e-4))
          << ProtocolName(kind) << " item " << i;
    }
  }
}

// Monte-Carlo loss against the analytic local-mechanism columns.
TEST(Estimators, LossMatchesAnalyticColumns) {
  const Dataset dataset = SynthZipf(5000, 20, 1.0, 91);
  const std::vector<double> truth = dataset.TrueFrequencies();
  const double eps_l = 1.0;
  const int runs = 1000;
  for (const ProtocolKind kind :
       {ProtocolKind::kGrrShuffle, ProtocolKind::kOueShuffle,
        ProtocolKind::kOlhShuffle, ProtocolKind::kRapporShuffle}) {
    RunningStats loss;
    Rng rng(DeriveSeed(21, static_cast<uint64_t>(kind)));
    for (int run = 0; run < runs; ++run) {
      const BaselineMessages messages =
          RandomizeAll(kind, dataset, eps_l, rng);
      const FrequencyEstimate estimate =
          EmpiricalEstimate(messages, dataset.n(), eps_l, dataset.d);
      double run_loss = 0.0;
      for (size_t i = 0; i < truth.size(); ++i) {
        const double diff = estimate.estimates[i] - truth[i];
        run_loss += diff * diff;
      }
      loss.Add(run_loss);
    }
    double analytic = 0.0;
    switch (kind) {
      case ProtocolKind::kGrrShuffle:
        analytic = GrrLocalL2(eps_l, dataset.n(), dataset.d);
        break;
      case ProtocolKind::kOueShuffle:
      case ProtocolKind::kOlhShuffle:
        analytic = OueLocalL2(eps_l, dataset.n(), dataset.d);
        break;
      default:
        analytic = RapporLocalL2(eps_l, dataset.n(), dataset.d);
    }
    EXPECT_NEAR(loss.mean / analytic, 1.0, 0.2) << ProtocolName(kind);
  }
}

TEST(MultiMessage, Bc20ZeroDummyProbIsIdentity) {
  const Dataset dataset = Dataset::FromValues({2, 1, 3}, 3);
  Rng rng(4);
  const MultiMessageReport report = Bc20Round(dataset, 0.0, rng);
  EXPECT_EQ(report.values, dataset.values);
  MultiMessageParams params;
  params.q1 = 0.0;
  const FrequencyEstimate estimate =
      MultiMessageEstimate(report, dataset.n(), params, 3);
  const std::vector<double> truth = dataset.TrueFrequencies();
  for (size_t i = 0; i < truth.size(); ++i) {
    EXPECT_DOUBLE_EQ(estimate.estimates[i], truth[i]);
  }
}

TEST(MultiMessage, ExpectedMessageCounts) {
  const Dataset dataset = SynthZipf(4000, 10, 0.0, 17);
  Rng rng(5);
  const double q3 = 0.35;
  RunningStats lwy_count;
  for (int trial = 0; trial < 50; ++trial) {
    const MultiMessageReport report = Lwy22Round(dataset, q3, rng);
    lwy_count.Add(static_cast<double>(report.message_count));
  }
  const double expected = static_cast<double>(dataset.n()) * (1.0 + q3);
  EXPECT_NEAR(lwy_count.mean, expected, 4.0 * lwy_count.StdErr() + 1.0);

  // Dummy bit vectors carry d q2 ones in expectation.
  const double q2 = 0.3;
  const MultiMessageReport cm22 = Cm22Round(dataset, q2, 3, rng);
  EXPECT_EQ(cm22.message_count, dataset.n() * 4);
  RunningStats dummy_ones;
  for (size_t i = 0; i < cm22.vectors.size(); ++i) {
    if (i % 4 == 0) continue;  // skip the input-bearing vector
    int64_t ones = 0;
    for (const uint8_t bit : cm22.vectors[i]) ones += bit;
    dummy_ones.Add(static_cast<double>(ones));
  }
  EXPECT_NEAR(dummy_ones.mean, static_cast<double>(dataset.d) * q2,
              4.0 * dummy_ones.StdErr());
}

TEST(MultiMessage, MonteCarloUnbiasedAndLossExact) {
  const Dataset dataset = SynthZipf(2000, 8, 1.0, 23);
  const std::vector<double> truth = dataset.TrueFrequencies();
  const double delta = 1e-8;

  struct Case {
    ProtocolKind kind;
    double eps;
    int64_t n_for_params;
  };
  // Parameters solved at the dataset size where the validity floor allows.
  const double eps_bc20 = 1.0;
  const double q1 = Bc20DummyProb(eps_bc20, delta, 10000);
  const Cm22Params cm22 = Cm22ParamsFor(1.0, delta, dataset.n());
  const double q3 = Lwy22DummyProb(1.0, delta, 110000, dataset.d);

  MultiMessageParams params;
  params.q1 = q1;
  params.q2 = cm22.q2;
  params.xi = cm22.xi;
  params.q3 = q3;

  for (const ProtocolKind kind :
       {ProtocolKind::kBc20, ProtocolKind::kCm22, ProtocolKind::kLwy22}) {
    const int runs = 1000;
    RunningStats loss;
    std::vector<RunningStats> per_item(truth.size());
    Rng rng(DeriveSeed(31, static_cast<uint64_t>(kind)));
    for (int run = 0; run < runs; ++run) {
      MultiMessageReport report;
      if (kind == ProtocolKind::kBc20) {
        report = Bc20Round(dataset, params.q1, rng);
      } else if (kind == ProtocolKind::kCm22) {
        report = Cm22Round(dataset, params.q2, params.xi, rng);
      } else {
        report = Lwy22Round(dataset, params.q3, rng);
      }
      const FrequencyEstimate estimate =
          MultiMessageEstimate(report, dataset.n(), params, dataset.d);
      double run_loss = 0.0;
      for (size_t i = 0; i < truth.size(); ++i) {
        per_item[i].Add(estimate.estimates[i]);
        const double diff = estimate.estimates[i] - truth[i];
        run_loss += diff * diff;
      }
      loss.Add(run_loss);
    }
    for (size_t i = 0; i < truth.size(); ++i) {
      EXPECT_NEAR(per_item[i].mean, truth[i], 4.0 * per_item[i].StdErr())
          << ProtocolName(kind) << " item " << i;
    }
    const double nn = static_cast<double>(dataset.n());
    const double dd = static_cast<double>(dataset.d);
    double analytic = 0.0;
    if (kind == ProtocolKind::kBc20) {
      analytic = dd * params.q1 * (1.0 - params.q1) / nn;
    } else if (kind == ProtocolKind::kCm22) {
      const double spread = 1.0 - 2.0 * params.q2;
      analytic = dd * static_cast<double>(params.xi + 1) * params.q2 *
                 (1.0 - params.q2) / (nn * spread * spread);
    } else {
      analytic = params.q3 * (1.0 - params.q3 / dd) / nn;
    }
    EXPECT_NEAR(loss.mean / analytic, 1.0, 0.2) << ProtocolName(kind);
  }
}

TEST(ExpectedL2, TighterRowAtReferencePoint) {
  const double eps = 1.0;
  const double delta = 1e-12;
  const int64_t n = 10000;
  const int32_t d = 100;
  const double sageo = BaselineExpectedL2(ProtocolKind::kSAGeo, eps, delta, n, d);
  const double sbin = BaselineExpectedL2(ProtocolKind::kSBin, eps, delta, n, d);
  EXPECT_LT(sageo, sbin);
  // Randomized response uses its own tighter amplification bound.
  const double eps_l_grr = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                   eps, n, d, delta);
  EXPECT_NEAR(BaselineExpectedL2(ProtocolKind::kGrrShuffle, eps, delta, n, d),
              GrrLocalL2(eps_l_grr, n, d), 1e-15);
  // Validity errors surface as domain errors.
  EXPECT_THROW(BaselineExpectedL2(ProtocolKind::kBc20, eps, delta, n, d),
               std::domain_error);
  EXPECT_THROW(BaselineExpectedL2(ProtocolKind::kLwy22, eps, delta, n, d),
               std::domain_error);
}

}  // namespace
}  // namespace augshuffle
