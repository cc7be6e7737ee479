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

#ifndef AUGSHUFFLE_ACCOUNTANT_H_
#define AUGSHUFFLE_ACCOUNTANT_H_

#include <cstdint>

#include "augshuffle/dummy_dist.hpp"
#include "augshuffle/protocol.hpp"

namespace augshuffle {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// The one-dimensional mechanism x -> Ber(beta) * x + z with z drawn from
// dist. A DP certificate for this mechanism at (eps/2, delta/2) implies
// (eps, delta)-DP of the full shuffle protocol built from the same
// distribution and sampling probability.
struct BinaryInputMechanism {
  const DummyCountDistribution* dist = nullptr;
  double beta = 1.0;
};

// ---------------------------------------------------------------------------
// Binomial dummy counts.

// Privacy of the binomial-dummy protocol with `trials` coin flips, sampling
// probability beta, and base budget eps0 >= log(2/trials + 1):
//   epsilon = 2 log(1 + beta (e^eps0 - 1))
//   delta   = 4 beta exp(-eta^2 trials / 2),
//   eta     = (e^eps0 - 1)/(e^eps0 + 1) - 2/(trials (e^eps0 + 1)).
PrivacyBudget SbinPrivacy(int64_t trials, double beta, double eps0);

// Minimal number of trials so that the protocol is (eps, delta)-DP at
// sampling probability beta.
int64_t SolveBinomialTrials(double eps, double delta, double beta);

// Earlier bounds on the binomial trial count, for comparison.
enum class BinomialBoundKind { kDkmmn08, kAsykm18 };
int64_t CompetingBinomialTrials(BinomialBoundKind kind, double eps,
                                double delta, int d);

// ---------------------------------------------------------------------------
// Asymmetric geometric dummy counts.

struct SageoRatios {
  double q_l = 0.0;
  double q_r = 0.0;
};

// q_l = (e^{-eps/2} - 1 + beta)/beta and q_r = beta/(e^{eps/2} - 1 + beta).
// Requires beta in [1 - e^{-eps/2}, 1] and eps > 0.
SageoRatios SageoRatiosFor(double eps, double beta);

// delta achieved by the asymmetric-geometric protocol at a given mode:
// 0 when q_l = 0, else (2/kappa) q_l^mode (1 - e^{eps/2} + beta e^{eps/2}).
double SageoDelta(double eps, double beta, int64_t mode);

// Minimal mode whose delta is at or below delta_target.
int64_t SolveSageoMode(double eps, double beta, double delta_target);

// Fully resolved proposed-protocol parameters. Construction nudges beta and
// q_r by at most a couple of ulps so that the likelihood-ratio inequalities
// that hold with equality in exact arithmetic also hold in doubles; this is
// what lets ExactDpProfile certify delta = 0 for the pure-DP configuration.
struct SageoParams {
  double beta = 1.0;
  double q_l = 0.0;
  double q_r = 0.0;
  int64_t mode = 0;
  double delta_achieved = 0.0;
};

SageoParams ResolveSageo(double eps, double beta, double delta_target);
// Special case beta = 1 - e^{-eps/2}; one-sided geometric dummies and
// delta = 0 (pure DP).
SageoParams ResolveS1geo(double eps);

struct SbinParams {
  double beta = 1.0;
  double eps0 = 0.0;
  int64_t trials = 0;
  double delta_achieved = 0.0;
};

SbinParams ResolveSbin(double eps, double delta, double beta);

// ---------------------------------------------------------------------------
// Exact (eps, delta) profiling.

// Tight delta of the binary input mechanism at privacy level eps_half: the
// larger hockey-stick divergence between the two output laws,
//   max over orderings of sum_o max(P(o|x) - e^{eps_half} P(o|x'), 0).
// Distributions with piecewise-geometric structure are evaluated in closed
// form (constant likelihood ratio per regime, exact geometric tail sums);
// finite supports are summed completely; anything else is truncated at tail
// mass 1e-15 which is added to the result so it never under-reports.
double ExactDpProfile(const BinaryInputMechanism& mech, double eps_half);

// ---------------------------------------------------------------------------
// Shuffle amplification bounds and their inversion.

// Closed-form amplification for an eps_l-LDP randomizer under shuffling:
//   log(1 + (e^{eps_l}-1)/(e^{eps_l}+1) (8 sqrt(e^{eps_l} log(4/delta))/sqrt(n)
//       + 8 e^{eps_l}/n))
// when eps_l <= log(n / (16 log(2/delta))), and eps_l otherwise.
double ShuffleAmplification(double eps_l, int64_t n, double delta);

// Amplification bound specific to generalized randomized response:
//   log(1 + (e^{eps_l}-1) (4 sqrt(2(d+1) log(4/delta)) /
//       sqrt((e^{eps_l}+d-1) d n) + 4(d+1)/(d n))).
double GrrAmplification(double eps_l, int64_t n, int d, double delta);

enum class AmplificationBoundKind { kGeneral, kGrr };

// Local budget eps_l whose amplified epsilon equals eps_target to 1e-10,
// found by bisection in [1e-12, 50].
double InvertAmplificationEpsL(AmplificationBoundKind kind, double eps_target,
                               int64_t n, int d, double delta);

// Parameter solvers for the multi-message baselines. Each throws when the
// target lies outside the protocol's validity range.
double Bc20DummyProb(double eps, double delta, int64_t n);

struct Cm22Params {
  double q2 = 0.0;
  int64_t xi = 0;
};
// q2 is fixed by eps_l (default 1); xi = max(10, minimal xi satisfying
// q2(1-q2) >= (33/(5 n xi)) ((e^eps+1)/(e^eps-1))^2 log(4/delta)).
Cm22Params Cm22ParamsFor(double eps, double delta, int64_t n,
                         double eps_l = 1.0);

double Lwy22DummyProb(double eps, double delta, int64_t n, int d);

// Epsilon actually guaranteed when the collector additionally learns the raw
// randomizer outputs of omega_size users. The local-noise-free protocols are
// unaffected; shuffle-amplified protocols degrade to their bound evaluated at
// n - omega_size.
double CollusionEpsilon(ProtocolKind kind, double target_eps, int64_t n,
                        int64_t omega_size, int d, double delta);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_ACCOUNTANT_H_
