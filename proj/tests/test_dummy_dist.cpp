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

#include "augshuffle/dummy_dist.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "augshuffle/random.hpp"
#include "augshuffle/stats.hpp"

namespace augshuffle {
namespace {

// Brute-force moments from the library PMF, truncated at the given tail mass.
struct TruncatedMoments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

TruncatedMoments MomentsBySummation(const DummyCountDistribution& dist,
                                    double tail_mass) {
  const int64_t upper = dist.SupportUpper(tail_mass);
  long double mass = 0.0L;
  long double first = 0.0L;
  long double second = 0.0L;
  for (int64_t k = 0; k <= upper; ++k) {
    const long double p = dist.Pmf(k);
    mass += p;
    first += static_cast<long double>(k) * p;
    second += static_cast<long double>(k) * static_cast<long double>(k) * p;
  }
  TruncatedMoments moments;
  moments.mass = static_cast<double>(mass);
  moments.mean = static_cast<double>(first);
  moments.variance = static_cast<double>(second - first * first);
  return moments;
}

// Pearson goodness-of-fit of sampled draws against the PMF, pooling bins with
// small expectation into the tail.
bool ChiSquarePasses(const DummyCountDistribution& dist, int64_t draws,
                     uint64_t seed, double significance) {
  Rng rng(seed);
  std::map<int64_t, int64_t> observed;
  for (int64_t i = 0; i < draws; ++i) ++observed[dist.Sample(rng)];

  const int64_t upper = dist.SupportUpper(1e-12);
  std::vector<double> expected_bins;
  std::vector<int64_t> observed_bins;
  double expected_acc = 0.0;
  int64_t observed_acc = 0;
  for (int64_t k = 0; k <= upper; ++k) {
    expected_acc += dist.Pmf(k) * static_cast<double>(draws);
    const auto it = observed.find(k);
    observed_acc += it != observed.end() ? it->second : 0;
    if (expected_acc >= 5.0) {
      expected_bins.push_back(expected_acc);
      observed_bins.push_back(observed_acc);
      expected_acc = 0.0;
      observed_acc = 0;
    }
  }
  // Everything beyond the last full bin.
  double tail_expected = expected_acc;
  int64_t tail_observed = observed_acc;
  for (const auto& [k, count] : observed) {
    if (k > upper) tail_observed += count;
  }
  if (tail_expected > 0.5) {
    expected_bins.push_back(tail_expected);
    observed_bins.push_back(tail_observed);
  }

  double statistic = 0.0;
  for (size_t i = 0; i < expected_bins.size(); ++i) {
    const double diff =
        static_cast<double>(observed_bins[i]) - expected_bins[i];
    statistic += diff * diff / expected_bins[i];
  }
  const double df = static_cast<double>(expected_bins.size()) - 1.0;
  return statistic <= Chi2Quantile(df, 1.0 - significance);
}

TEST(BinomialPmf, SmallCasesAreExact) {
  EXPECT_EQ(BinomialPmf(3, 0), 0.125);
  EXPECT_EQ(BinomialPmf(2, 1), 0.5);
  EXPECT_EQ(BinomialPmf(5, 7), 0.0);
  EXPECT_EQ(BinomialPmf(5, -1), 0.0);
}

TEST(BinomialPmf, SumsToOne) {
  long double total = 0.0L;
  for (int64_t k = 0; k <= 50; ++k) total += BinomialPmf(50, k);
  EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12);

  // Log-space branch.
  total = 0.0L;
  for (int64_t k = 0; k <= 500; ++k) total += BinomialPmf(500, k);
  EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-10);
}

TEST(AGeoDist, HandEvaluatedNormalizer) {
  // mode 2, q_l 0.3, q_r 0.5: kappa = 0.3 (1 - 0.09) / 0.7 + 2 = 2.39.
  const AGeoDist dist(2, 0.3, 0.5);
  EXPECT_NEAR(dist.normalizer(), 2.39, 1e-12);
  EXPECT_NEAR(dist.Pmf(2), 1.0 / 2.39, 1e-12);
  EXPECT_NEAR(dist.Pmf(0), 0.09 / 2.39, 1e-12);
  EXPECT_NEAR(dist.Pmf(3), 0.5 / 2.39, 1e-12);
  EXPECT_EQ(dist.Pmf(-1), 0.0);
  EXPECT_NEAR(MomentsBySummation(dist, 1e-15).mass, 1.0, 1e-12);
}

TEST(AGeoDist, ModeValueIsReciprocalKappa) {
  const std::vector<std::tuple<int64_t, double, double>> cases = {
      {0, 0.0, 0.5}, {3, 0.25, 0.6}, {7, 0.9, 0.95}};
  for (const auto& [mode, q_l, q_r] : cases) {
    const AGeoDist dist(mode, q_l, q_r);
    EXPECT_EQ(dist.Pmf(mode), 1.0 / dist.normalizer());
  }
}

TEST(AGeoDist, MeanMatchesSummationOracle) {
  const AGeoDist dist(2, 0.3, 0.5);
  const TruncatedMoments oracle = MomentsBySummation(dist, 1e-15);
  EXPECT_NEAR(dist.Mean(), oracle.mean, 1e-9);

  const OneSidedGeoDist geo(0.5);
  EXPECT_NEAR(geo.Mean(), 1.0, 1e-12);  // q_r / (1 - q_r)
  const OneSidedGeoDist tiny(1e-12);
  EXPECT_NEAR(tiny.Mean(), 0.0, 1e-9);
}

TEST(AGeoDist, VarianceExactAndBounded) {
  const AGeoDist dist(2, 0.3, 0.5);
  const TruncatedMoments oracle = MomentsBySummation(dist, 1e-15);
  EXPECT_NEAR(dist.Variance(), oracle.variance, 1e-9);
  EXPECT_GE(dist.VarianceUpper(), oracle.variance);

  const AGeoDist wide(10, 0.85, 0.9);
  const TruncatedMoments wide_oracle = MomentsBySummation(wide, 1e-15);
  EXPECT_NEAR(wide.Variance(), wide_oracle.variance, 1e-7);
  EXPECT_GE(wide.VarianceUpper(), wide_oracle.variance);

  EXPECT_EQ(BinomialDist(4).VarianceUpper(), 1.0);
  EXPECT_NEAR(OneSidedGeoDist(0.5).VarianceUpper(), 2.0, 1e-12);
}

TEST(DummyDist, NormalizationAcrossConstructions) {
  std::vector<std::unique_ptr<DummyCountDistribution>> dists;
  dists.push_back(std::make_unique<BinomialDist>(1));
  dists.push_back(std::make_unique<BinomialDist>(64));
  dists.push_back(std::make_unique<BinomialDist>(1000));
  dists.push_back(std::make_unique<OneSidedGeoDist>(0.1));
  dists.push_back(std::make_unique<OneSidedGeoDist>(0.93));
  dists.push_back(std::make_unique<AGeoDist>(0, 0.0, 0.4));
  dists.push_back(std::make_unique<AGeoDist>(5, 0.5, 0.5));
  dists.push_back(std::make_unique<AGeoDist>(40, 0.95, 0.97));
  for (const auto& dist : dists) {
    const double mass = MomentsBySummation(*dist, 1e-15).mass;
    EXPECT_GE(mass, 1.0 - 1e-12);
    EXPECT_LE(mass, 1.0 + 1e-12);
  }
}

TEST(DummyDist, SupportUpperIsMinimal) {
  const OneSidedGeoDist geo(0.5);
  const int64_t upper = geo.SupportUpper(1e-9);
  long double tail = 0.0L;
  for (int64_t k = upper + 1; k <= upper + 400; ++k) tail += geo.Pmf(k);
  EXPECT_LT(static_cast<double>(tail), 1e-9);
  tail += geo.Pmf(upper);
  EXPECT_GE(static_cast<double>(tail), 1e-9);
}

TEST(OneSidedGeoDist, MatchesItsAGeoCore) {
  const OneSidedGeoDist geo(0.37);
  const AGeoDist core(0, 0.0, 0.37);
  for (int64_t k = 0; k <= 100; ++k) {
    EXPECT_EQ(geo.Pmf(k), core.Pmf(k)) << "k=" << k;
  }
  EXPECT_EQ(OneSidedGeoDist(0.5).Pmf(2), 0.125);
}

TEST(AGeoDist, SymmetricWhenRatiosMatch) {
  const double q = std::exp(-0.5);
  const AGeoDist dist(9, q, q);
  for (int64_t j = 0; j <= 9; ++j) {
    EXPECT_EQ(dist.Pmf(9 + j), dist.Pmf(9 - j)) << "j=" << j;
  }
}

TEST(Sampling, DeterministicGivenSeed) {
  const AGeoDist dist(2, 0.3, 0.5);
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(dist.Sample(a), dist.Sample(b));
  }
}

TEST(Sampling, DegenerateBinomialIsZero) {
  const BinomialDist dist(0);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(dist.Sample(rng), 0);
}

TEST(Sampling, GeometricSampleMean) {
  const OneSidedGeoDist dist(0.5);  // mean 1, variance 2
  Rng rng(12345);
  RunningStats stats;
  for (int64_t i = 0; i < 1000000; ++i) {
    stats.Add(static_cast<double>(dist.Sample(rng)));
  }
  EXPECT_NEAR(stats.mean, 1.0, 4.0 * std::sqrt(2.0 / 1e6));
}

TEST(Sampling, ChiSquareAgainstPmf) {
  EXPECT_TRUE(ChiSquarePasses(AGeoDist(2, 0.3, 0.5), 1000000, 2024, 1e-3));
  EXPECT_TRUE(ChiSquarePasses(BinomialDist(40), 1000000, 2025, 1e-3));
  EXPECT_TRUE(ChiSquarePasses(BinomialDist(300), 1000000, 2026, 1e-3));
  EXPECT_TRUE(ChiSquarePasses(OneSidedGeoDist(0.7), 1000000, 2027, 1e-3));
}

TEST(DummyDist, RejectsBadParameters) {
  EXPECT_THROW(AGeoDist(-1, 0.3, 0.5), std::domain_error);
  EXPECT_THROW(AGeoDist(2, 1.0, 0.5), std::domain_error);
  EXPECT_THROW(AGeoDist(2, 0.3, 1.0), std::domain_error);
  EXPECT_THROW(AGeoDist(2, 0.3, 0.0), std::domain_error);
  EXPECT_THROW(BinomialDist(-1), std::domain_error);
  EXPECT_THROW(BinomialPmf(-1, 0), std::domain_error);
}

}  // namespace
}  // namespace augshuffle
