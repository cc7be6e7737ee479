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

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace augshuffle {
namespace {

// C(n, k) for n <= 60 fits in uint64 (max C(60,30) ~ 1.18e17).
uint64_t SmallBinomialCoefficient(int64_t n, int64_t k) {
  if (k > n - k) k = n - k;
  uint64_t c = 1;
  for (int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
  }
  return c;
}

}  // namespace

double BinomialPmf(int64_t trials, int64_t k) {
  if (trials < 0) throw std::domain_error("BinomialPmf: trials must be >= 0");
  if (k < 0 || k > trials) return 0.0;
  if (trials == 0) return 1.0;
  if (trials <= 60) {
    return std::ldexp(static_cast<double>(SmallBinomialCoefficient(trials, k)),
                      static_cast<int>(-trials));
  }
  const double log_pmf = std::lgamma(static_cast<double>(trials) + 1.0) -
                         std::lgamma(static_cast<double>(k) + 1.0) -
                         std::lgamma(static_cast<double>(trials - k) + 1.0) -
                         static_cast<double>(trials) * std::log(2.0);
  return std::exp(log_pmf);
}

BinomialDist::BinomialDist(int64_t trials) : trials_(trials) {
  if (trials < 0) {
    throw std::domain_error("BinomialDist: trials must be >= 0");
  }
  if (trials_ > 64) {
    cdf_.resize(static_cast<size_t>(trials_) + 1);
    long double acc = 0.0L;
    for (int64_t k = 0; k <= trials_; ++k) {
      acc += static_cast<long double>(BinomialPmf(trials_, k));
      cdf_[static_cast<size_t>(k)] = static_cast<double>(acc);
    }
  }
}

double BinomialDist::Pmf(int64_t k) const { return BinomialPmf(trials_, k); }

int64_t BinomialDist::Sample(Rng& rng) const {
  if (trials_ == 0) return 0;
  if (trials_ <= 64) {
    const uint64_t mask =
        trials_ == 64 ? ~0ULL : ((1ULL << trials_) - 1ULL);
    return std::popcount(rng.NextU64() & mask);
  }
  const double u = rng.NextUnit();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return trials_;
  return static_cast<int64_t>(it - cdf_.begin());
}

int64_t BinomialDist::SupportUpper(double tail_mass) const {
  long double acc = 0.0L;
  for (int64_t k = trials_; k >= 0; --k) {
    acc += static_cast<long double>(Pmf(k));
    if (acc >= static_cast<long double>(tail_mass)) return k;
  }
  return 0;
}

AGeoDist::AGeoDist(int64_t mode, double q_l, double q_r)
    : mode_(mode), q_l_(q_l), q_r_(q_r) {
  if (mode < 0) throw std::domain_error("AGeoDist: mode must be >= 0");
  if (q_l < 0.0 || q_l >= 1.0) {
    throw std::domain_error("AGeoDist: q_l must lie in [0, 1)");
  }
  if (q_r <= 0.0 || q_r >= 1.0) {
    throw std::domain_error("AGeoDist: q_r must lie in (0, 1)");
  }
  inv_q_r_ = 1.0 / q_r_;
  double left_sum = 0.0;  // q_l (1 - q_l^mode) / (1 - q_l), 0 when q_l = 0
  if (q_l_ > 0.0 && mode_ > 0) {
    left_sum = q_l_ * (1.0 - std::pow(q_l_, static_cast<double>(mode_))) /
               (1.0 - q_l_);
  }
  kappa_ = left_sum + 1.0 / (1.0 - q_r_);
  kappa_star_ = (q_l_ > 0.0 ? q_l_ / (1.0 - q_l_) : 0.0) + 1.0 / (1.0 - q_r_);
  left_mass_ = left_sum / kappa_;
}

double AGeoDist::Pmf(int64_t k) const {
  if (k < 0) return 0.0;
  if (k >= mode_) {
    return std::pow(q_r_, static_cast<double>(k - mode_)) / kappa_;
  }
  if (q_l_ == 0.0) return 0.0;
  return std::pow(q_l_, static_cast<double>(mode_ - k)) / kappa_;
}

int64_t AGeoDist::Sample(Rng& rng) const {
  const double u = rng.NextUnit();
  if (u < left_mass_) {
    // Left branch: j = mode - k in [1, mode] with mass proportional to
    // q_l^j. Inverse CDF of the truncated geometric in closed form.
    const double v = rng.NextUnitOpen();
    const double trunc = 1.0 - std::pow(q_l_, static_cast<double>(mode_));
    const double t = std::log(1.0 - v * trunc) / std::log(q_l_);
    int64_t j = static_cast<int64_t>(std::floor(t)) + 1;
    j = std::clamp<int64_t>(j, 1, mode_);
    return mode_ - j;
  }
  // Right branch: mode + geometric(q_r).
  const double w = rng.NextUnitOpen();
  const int64_t g =
      static_cast<int64_t>(std::floor(std::log(w) / std::log(q_r_)));
  return mode_ + std::max<int64_t>(g, 0);
}

double AGeoDist::Mean() const {
  // (1/kappa) (sum_{k<mode} k q_l^(mode-k) + (q_r + (1-q_r) mode)/(1-q_r)^2)
  double left = 0.0;
  if (q_l_ > 0.0) {
    double power = q_l_;  // q_l^(mode-k) with k descending from mode-1
    for (int64_t k = mode_ - 1; k >= 1; --k) {
      left += static_cast<double>(k) * power;
      power *= q_l_;
    }
  }
  const double right =
      (q_r_ + (1.0 - q_r_) * static_cast<double>(mode_)) /
      ((1.0 - q_r_) * (1.0 - q_r_));
  return (left + right) / kappa_;
}

double AGeoDist::Variance() const {
  double left = 0.0;
  if (q_l_ > 0.0) {
    double power = q_l_;
    for (int64_t k = mode_ - 1; k >= 1; --k) {
      left += static_cast<double>(k) * static_cast<double>(k) * power;
      power *= q_l_;
    }
  }
  const double one_minus = 1.0 - q_r_;
  const double nu = static_cast<double>(mode_);
  const double right = q_r_ * (1.0 + q_r_) / (one_minus * one_minus * one_minus) +
                       2.0 * nu * q_r_ / (one_minus * one_minus) +
                       nu * nu / one_minus;
  const double second_moment = (left + right) / kappa_;
  const double mean = Mean();
  return second_moment - mean * mean;
}

double AGeoDist::VarianceUpper() const {
  // Second moment of the untruncated two-sided geometric with mode at zero.
  const double left =
      q_l_ > 0.0
          ? q_l_ * (1.0 + q_l_) / ((1.0 - q_l_) * (1.0 - q_l_) * (1.0 - q_l_))
          : 0.0;
  const double right =
      q_r_ * (1.0 + q_r_) / ((1.0 - q_r_) * (1.0 - q_r_) * (1.0 - q_r_));
  return (left + right) / kappa_star_;
}

int64_t AGeoDist::SupportUpper(double tail_mass) const {
  if (tail_mass <= 0.0) {
    throw std::domain_error("SupportUpper: tail_mass must be positive");
  }
  // Mass above K (K >= mode) is q_r^(K-mode+1) / ((1-q_r) kappa).
  const double log_target =
      std::log(tail_mass * (1.0 - q_r_) * kappa_) / std::log(q_r_);
  int64_t k = mode_ + std::max<int64_t>(
                          0, static_cast<int64_t>(std::ceil(log_target)) - 1);
  auto tail_above = [this](int64_t kk) {
    return std::pow(q_r_, static_cast<double>(kk - mode_ + 1)) /
           ((1.0 - q_r_) * kappa_);
  };
  while (tail_above(k) >= tail_mass) ++k;
  while (k > 0 && tail_above(k - 1) < tail_mass) --k;
  return k;
}

std::optional<AGeoShape> AGeoDist::AsAGeo() const {
  return AGeoShape{mode_, q_l_, q_r_, inv_q_r_, kappa_};
}

OneSidedGeoDist::OneSidedGeoDist(double q_r) : core_(0, 0.0, q_r), q_r_(q_r) {}

}  // namespace augshuffle
