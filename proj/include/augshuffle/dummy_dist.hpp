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

#ifndef AUGSHUFFLE_DUMMY_DIST_H_
#define AUGSHUFFLE_DUMMY_DIST_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "augshuffle/random.hpp"

namespace augshuffle {

// Piecewise-geometric structure of a dummy-count distribution: PMF
// proportional to q_l^(mode-k) left of the mode and q_r^(k-mode) from the
// mode rightward. Exposed so the privacy profiler can evaluate likelihood
// ratios and tail masses in closed form instead of term by term.
struct AGeoShape {
  int64_t mode;
  double q_l;
  double q_r;
  double inv_q_r;  // cached 1/q_r; adjacent-PMF ratio right of the mode
  double kappa;    // normalizer
};

// A distribution over the nonnegative integers used for per-item dummy
// counts. Implementations are immutable after construction and safe to share
// across threads; Sample draws from a caller-owned generator.
class DummyCountDistribution {
 public:
  virtual ~DummyCountDistribution() = default;

  virtual double Pmf(int64_t k) const = 0;
  virtual int64_t Sample(Rng& rng) const = 0;
  virtual double Mean() const = 0;
  // Exact variance.
  virtual double Variance() const = 0;
  // Closed-form upper bound on the variance; equals Variance() when a tight
  // closed form exists.
  virtual double VarianceUpper() const = 0;
  // Smallest K such that the mass above K is below tail_mass.
  virtual int64_t SupportUpper(double tail_mass) const = 0;

  virtual std::optional<AGeoShape> AsAGeo() const { return std::nullopt; }
  virtual std::optional<int64_t> FiniteSupportMax() const {
    return std::nullopt;
  }
};

// Exact binomial PMF C(trials, k) / 2^trials; log-space above 60 trials.
double BinomialPmf(int64_t trials, int64_t k);

// Binomial(trials, 1/2). Sampling uses popcount of raw bits up to 64 trials
// and an inverse-CDF table beyond that.
class BinomialDist final : public DummyCountDistribution {
 public:
  explicit BinomialDist(int64_t trials);

  double Pmf(int64_t k) const override;
  int64_t Sample(Rng& rng) const override;
  double Mean() const override { return static_cast<double>(trials_) / 2.0; }
  double Variance() const override {
    return static_cast<double>(trials_) / 4.0;
  }
  double VarianceUpper() const override { return Variance(); }
  int64_t SupportUpper(double tail_mass) const override;
  std::optional<int64_t> FiniteSupportMax() const override { return trials_; }

  int64_t trials() const { return trials_; }

 private:
  int64_t trials_;
  std::vector<double> cdf_;  // empty when trials_ <= 64
};

// Asymmetric two-sided geometric distribution on the nonnegative integers,
// truncated at zero with its mode at `mode`:
//   Pmf(k) = q_l^(mode-k) / kappa   for k < mode,
//   Pmf(k) = q_r^(k-mode) / kappa   for k >= mode,
//   kappa  = q_l (1 - q_l^mode) / (1 - q_l) + 1 / (1 - q_r),
// with the left term taken as 0 when q_l = 0.
class AGeoDist final : public DummyCountDistribution {
 public:
  AGeoDist(int64_t mode, double q_l, double q_r);

  double Pmf(int64_t k) const override;
  int64_t Sample(Rng& rng) const override;
  double Mean() const override;
  double Variance() const override;
  double VarianceUpper() const override;
  int64_t SupportUpper(double tail_mass) const override;
  std::optional<AGeoShape> AsAGeo() const override;

  int64_t mode() const { return mode_; }
  double left_ratio() const { return q_l_; }
  double right_ratio() const { return q_r_; }
  double normalizer() const { return kappa_; }
  // Untruncated normalizer q_l/(1-q_l) + 1/(1-q_r); the variance bound is
  // stated against this rather than the truncated kappa.
  double normalizer_untruncated() const { return kappa_star_; }

 private:
  int64_t mode_;
  double q_l_;
  double q_r_;
  double inv_q_r_;
  double kappa_;
  double kappa_star_;
  double left_mass_;  // total mass strictly left of the mode
};

// One-sided geometric distribution Pmf(k) = (1 - q_r) q_r^k. Behaves exactly
// like AGeoDist(0, 0, q_r): the PMF and sampler delegate to that core, so the
// two are bitwise interchangeable; mean and variance use the tight closed
// forms q_r/(1-q_r) and q_r/(1-q_r)^2.
class OneSidedGeoDist final : public DummyCountDistribution {
 public:
  explicit OneSidedGeoDist(double q_r);

  double Pmf(int64_t k) const override { return core_.Pmf(k); }
  int64_t Sample(Rng& rng) const override { return core_.Sample(rng); }
  double Mean() const override { return q_r_ / (1.0 - q_r_); }
  double Variance() const override {
    return q_r_ / ((1.0 - q_r_) * (1.0 - q_r_));
  }
  double VarianceUpper() const override { return Variance(); }
  int64_t SupportUpper(double tail_mass) const override {
    return core_.SupportUpper(tail_mass);
  }
  std::optional<AGeoShape> AsAGeo() const override { return core_.AsAGeo(); }

  double ratio() const { return q_r_; }

 private:
  AGeoDist core_;
  double q_r_;
};

}  // namespace augshuffle

#endif  // AUGSHUFFLE_DUMMY_DIST_H_
