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

#include "augshuffle/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace augshuffle {
namespace {

constexpr int64_t kMaxTrials = int64_t{1} << 62;

double LogSbinDelta(int64_t trials, double beta, double e_eps0) {
  const double m = static_cast<double>(trials);
  const double eta = (e_eps0 - 1.0) / (e_eps0 + 1.0) - 2.0 / (m * (e_eps0 + 1.0));
  return std::log(4.0 * beta) - eta * eta * m / 2.0;
}

void CheckBudgetInputs(double eps, double delta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::domain_error("epsilon must be positive and finite");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
}

}  // namespace

PrivacyBudget SbinPrivacy(int64_t trials, double beta, double eps0) {
  if (trials < 1) throw std::domain_error("SbinPrivacy: trials must be >= 1");
  if (beta < 0.0 || beta > 1.0) {
    throw std::domain_error("SbinPrivacy: beta must lie in [0, 1]");
  }
  const double m = static_cast<double>(trials);
  if (eps0 < std::log(2.0 / m + 1.0)) {
    throw std::domain_error(
        "SbinPrivacy: eta >= 0 requires eps0 >= log(2/trials + 1)");
  }
  if (beta == 0.0) return {0.0, 0.0};
  const double e_eps0 = std::exp(eps0);
  PrivacyBudget budget;
  budget.epsilon = 2.0 * std::log1p(beta * (e_eps0 - 1.0));
  budget.delta = std::exp(LogSbinDelta(trials, beta, e_eps0));
  return budget;
}

int64_t SolveBinomialTrials(double eps, double delta, double beta) {
  CheckBudgetInputs(eps, delta);
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::domain_error("SolveBinomialTrials: beta must lie in (0, 1]");
  }
  // Base budget from epsilon = 2 log(1 + beta (e^eps0 - 1)).
  const double e_eps0 = 1.0 + std::expm1(eps / 2.0) / beta;
  const double log_delta_target = std::log(delta);

  auto feasible_floor = [&](int64_t m) {
    return static_cast<double>(m) * (e_eps0 - 1.0) >= 2.0;
  };
  int64_t lo = std::max<int64_t>(
      1, static_cast<int64_t>(std::ceil(2.0 / (e_eps0 - 1.0))));
  while (!feasible_floor(lo)) ++lo;

  auto meets_delta = [&](int64_t m) {
    return LogSbinDelta(m, beta, e_eps0) <= log_delta_target;
  };

  int64_t hi = lo;
  while (!meets_delta(hi)) {
    if (hi >= kMaxTrials) {
      throw std::domain_error(
          "SolveBinomialTrials: no feasible trial count below 2^62");
    }
    hi = std::min(kMaxTrials, hi * 2);
  }
  while (lo < hi) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (meets_delta(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

int64_t CompetingBinomialTrials(BinomialBoundKind kind, double eps,
                                double delta, int d) {
  CheckBudgetInputs(eps, delta);
  if (kind == BinomialBoundKind::kDkmmn08) {
    // delta = 4 exp(-eps^2 M / 256)  =>  M = 256 log(4/delta) / eps^2.
    return static_cast<int64_t>(
        std::ceil(256.0 * std::log(4.0 / delta) / (eps * eps)));
  }
  if (d < 1) throw std::domain_error("CompetingBinomialTrials: d must be >= 1");
  // eps = c1/sqrt(M) + c2/M with a hard floor on M.
  const double c1 = 4.0 * std::sqrt(2.0 * std::log(1.25 / delta));
  const double c2 =
      8.0 / (1.0 - delta / 10.0) *
          (7.0 * std::sqrt(2.0) / 4.0 * std::sqrt(std::log(10.0 / delta)) +
           1.0 / 3.0) +
      16.0 / 3.0 *
          (std::log(1.25 / delta) +
           std::log(20.0 * d / delta) * std::log(10.0 / delta));
  const int64_t floor_trials = static_cast<int64_t>(
      std::ceil(4.0 * std::max(23.0 * std::log(10.0 * d / delta), 4.0)));
  auto eps_of = [&](int64_t m) {
    const double x = static_cast<double>(m);
    return c1 / std::sqrt(x) + c2 / x;
  };
  const double root = (c1 + std::sqrt(c1 * c1 + 4.0 * eps * c2)) / (2.0 * eps);
  int64_t m = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(root * root)));
  while (eps_of(m) > eps) ++m;
  while (m > 1 && eps_of(m - 1) <= eps) --m;
  return std::max(m, floor_trials);
}

SageoRatios SageoRatiosFor(double eps, double beta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::domain_error("SageoRatiosFor: requires eps > 0 (q_r < 1)");
  }
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::domain_error("SageoRatiosFor: beta must lie in (0, 1]");
  }
  if (beta == 1.0) {
    const double q = std::exp(-eps / 2.0);
    return {q, q};
  }
  const double numerator = std::expm1(-eps / 2.0) + beta;
  if (numerator < 0.0) {
    throw std::domain_error(
        "SageoRatiosFor: beta must be at least 1 - e^{-eps/2}");
  }
  SageoRatios ratios;
  ratios.q_l = numerator / beta;
  ratios.q_r = beta / (std::expm1(eps / 2.0) + beta);
  return ratios;
}

double SageoDelta(double eps, double beta, int64_t mode) {
  const SageoRatios r = SageoRatiosFor(eps, beta);
  if (r.q_l == 0.0) return 0.0;
  const double e_half = std::exp(eps / 2.0);
  const double mass_factor = std::max(0.0, 1.0 - e_half * (1.0 - beta));
  double kappa = 1.0 / (1.0 - r.q_r);
  if (mode > 0) {
    kappa += r.q_l * (1.0 - std::pow(r.q_l, static_cast<double>(mode))) /
             (1.0 - r.q_l);
  }
  return 2.0 / kappa * std::pow(r.q_l, static_cast<double>(mode)) * mass_factor;
}

int64_t SolveSageoMode(double eps, double beta, double delta_target) {
  if (!(delta_target > 0.0) || delta_target > 1.0) {
    throw std::domain_error("SolveSageoMode: delta_target must lie in (0, 1]");
  }
  const SageoRatios r = SageoRatiosFor(eps, beta);
  if (r.q_l == 0.0) return 0;
  const double e_half = std::exp(eps / 2.0);
  const double mass_factor = std::max(0.0, 1.0 - e_half * (1.0 - beta));
  const double right_kappa = 1.0 / (1.0 - r.q_r);
  double power = 1.0;       // q_l^mode
  double left_kappa = 0.0;  // sum of q_l^j for j = 1..mode
  int64_t mode = 0;
  while (2.0 / (left_kappa + right_kappa) * power * mass_factor >
         delta_target) {
    power *= r.q_l;
    left_kappa += power;
    ++mode;
  }
  // Pin minimality against the reference evaluator (the incremental kappa
  // above can differ from it in the last ulp).
  while (mode > 0 && SageoDelta(eps, beta, mode - 1) <= delta_target) --mode;
  while (SageoDelta(eps, beta, mode) > delta_target) ++mode;
  return mode;
}

SageoParams ResolveSageo(double eps, double beta, double delta_target) {
  SageoParams params;
  params.beta = beta;
  SageoRatios r = SageoRatiosFor(eps, beta);
  params.mode = r.q_l == 0.0 ? 0 : SolveSageoMode(eps, beta, delta_target);
  const double e_half = std::exp(eps / 2.0);
  if (r.q_l == 0.0) {
    // Pure-DP configuration. Force the two ratio identities that hold with
    // equality in exact arithmetic to hold as inequalities in doubles:
    //   e^{eps/2} (1 - beta) >= 1   and   (1 - beta) + beta / q_r <= e^{eps/2}.
    while (e_half * (1.0 - params.beta) < 1.0) {
      params.beta = std::nextafter(params.beta, 0.0);
    }
    double q_r = params.beta / (std::expm1(eps / 2.0) + params.beta);
    // Same beta * (1/q_r) expression the profiler evaluates.
    while ((1.0 - params.beta) + params.beta * (1.0 / q_r) > e_half) {
      q_r = std::nextafter(q_r, 1.0);
    }
    params.q_l = 0.0;
    params.q_r = q_r;
    params.delta_achieved = 0.0;
    return params;
  }
  params.q_l = r.q_l;
  params.q_r = r.q_r;
  params.delta_achieved = SageoDelta(eps, beta, params.mode);
  return params;
}

SageoParams ResolveS1geo(double eps) {
  return ResolveSageo(eps, -std::expm1(-eps / 2.0), 1.0);
}

SbinParams ResolveSbin(double eps, double delta, double beta) {
  SbinParams params;
  params.beta = beta;
  params.trials = SolveBinomialTrials(eps, delta, beta);
  params.eps0 = std::log1p(std::expm1(eps / 2.0) / beta);
  params.delta_achieved = SbinPrivacy(params.trials, beta, params.eps0).delta;
  return params;
}

double ExactDpProfile(const BinaryInputMechanism& mech, double eps_half) {
  if (mech.dist == nullptr) {
    throw std::invalid_argument("ExactDpProfile: mechanism has no distribution");
  }
  if (eps_half < 0.0) {
    throw std::domain_error("ExactDpProfile: eps_half must be >= 0");
  }
  const double beta = mech.beta;
  if (beta < 0.0 || beta > 1.0) {
    throw std::domain_error("ExactDpProfile: beta must lie in [0, 1]");
  }
  const DummyCountDistribution& dist = *mech.dist;
  const double e = std::exp(eps_half);

  if (const auto shape = dist.AsAGeo()) {
    // The likelihood ratio P(o|1)/P(o|0) = (1-beta) + beta pmf(o-1)/pmf(o)
    // is constant on three regimes: {0}, {1..mode}, {mode+1..}. Summing per
    // regime keeps each max() decision a single exact sign test and handles
    // the infinite tail in closed form.
    const double q_l = shape->q_l;
    const double q_r = shape->q_r;
    const double kappa = shape->kappa;
    const int64_t mode = shape->mode;
    const double p_zero = dist.Pmf(0);
    const double mass_mid =
        mode > 0 ? (1.0 - std::pow(q_l, static_cast<double>(mode))) /
                       ((1.0 - q_l) * kappa)
                 : 0.0;
    const double mass_tail = q_r / ((1.0 - q_r) * kappa);
    const double c_zero = 1.0 - beta;
    const double c_mid = (1.0 - beta) + beta * q_l;
    const double c_tail = (1.0 - beta) + beta * shape->inv_q_r;
    auto hockey = [&](double c, double mass, bool one_vs_zero) {
      const double gap = one_vs_zero ? c - e : 1.0 - e * c;
      return gap > 0.0 ? gap * mass : 0.0;
    };
    const double one_vs_zero = hockey(c_zero, p_zero, true) +
                               hockey(c_mid, mass_mid, true) +
                               hockey(c_tail, mass_tail, true);
    const double zero_vs_one = hockey(c_zero, p_zero, false) +
                               hockey(c_mid, mass_mid, false) +
                               hockey(c_tail, mass_tail, false);
    return std::max(one_vs_zero, zero_vs_one);
  }

  int64_t upper;
  long double tail_slack = 0.0L;
  if (const auto max_support = dist.FiniteSupportMax()) {
    upper = *max_support + 1;
  } else {
    upper = dist.SupportUpper(1e-15) + 1;
    tail_slack = 1e-15L;
  }
  long double one_vs_zero = 0.0L;
  long double zero_vs_one = 0.0L;
  for (int64_t o = 0; o <= upper; ++o) {
    const long double p_cur = dist.Pmf(o);
    const long double p_prev = o >= 1 ? dist.Pmf(o - 1) : 0.0L;
    const long double p_one =
        (1.0L - static_cast<long double>(beta)) * p_cur +
        static_cast<long double>(beta) * p_prev;
    const long double p_zero = p_cur;
    const long double gap_a = p_one - static_cast<long double>(e) * p_zero;
    const long double gap_b = p_zero - static_cast<long double>(e) * p_one;
    if (gap_a > 0.0L) one_vs_zero += gap_a;
    if (gap_b > 0.0L) zero_vs_one += gap_b;
  }
  return static_cast<double>(std::max(one_vs_zero, zero_vs_one) + tail_slack);
}

double ShuffleAmplification(double eps_l, int64_t n, double delta) {
  if (eps_l < 0.0) throw std::domain_error("eps_l must be >= 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  const double branch =
      std::log(static_cast<double>(n) / (16.0 * std::log(2.0 / delta)));
  if (!(eps_l <= branch)) return eps_l;
  const double e_l = std::exp(eps_l);
  const double term =
      (e_l - 1.0) / (e_l + 1.0) *
      (8.0 * std::sqrt(e_l * std::log(4.0 / delta)) /
           std::sqrt(static_cast<double>(n)) +
       8.0 * e_l / static_cast<double>(n));
  return std::log1p(term);
}

double GrrAmplification(double eps_l, int64_t n, int d, double delta) {
  if (eps_l < 0.0) throw std::domain_error("eps_l must be >= 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (d < 2) throw std::domain_error("d must be >= 2");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  const double e_l = std::exp(eps_l);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double term =
      (e_l - 1.0) * (4.0 * std::sqrt(2.0 * (dd + 1.0) * std::log(4.0 / delta)) /
                         std::sqrt((e_l + dd - 1.0) * dd * nn) +
                     4.0 * (dd + 1.0) / (dd * nn));
  return std::log1p(term);
}

double InvertAmplificationEpsL(AmplificationBoundKind kind, double eps_target,
                               int64_t n, int d, double delta) {
  if (!(eps_target > 0.0)) {
    throw std::domain_error("InvertAmplificationEpsL: eps_target must be > 0");
  }
  constexpr double kLow = 1e-12;
  constexpr double kHigh = 50.0;
  constexpr double kTolerance = 1e-10;

  auto bisect = [&](auto&& g, double lo, double hi) {
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double value = g(mid);
      if (std::abs(value - eps_target) <= kTolerance) return mid;
      if (value < eps_target) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
  };

  if (kind == AmplificationBoundKind::kGrr) {
    auto g = [&](double eps_l) { return GrrAmplification(eps_l, n, d, delta); };
    if (g(kHigh) < eps_target) {
      throw std::domain_error(
          "InvertAmplificationEpsL: target above the bound's range at eps_l "
          "= 50");
    }
    return bisect(g, kLow, kHigh);
  }

  // General bound: the amplified epsilon follows the closed form up to the
  // branch point log(n / (16 log(2/delta))) and equals eps_l beyond it, so
  // the achievable targets form two intervals.
  const double branch =
      std::log(static_cast<double>(n) / (16.0 * std::log(2.0 / delta)));
  if (branch <= kLow) return eps_target;  // no amplification regime at this n
  const double g_branch = ShuffleAmplification(branch, n, delta);
  if (eps_target <= g_branch + kTolerance) {
    auto g = [&](double eps_l) { return ShuffleAmplification(eps_l, n, delta); };
    return bisect(g, kLow, branch);
  }
  if (eps_target >= branch) return eps_target;
  throw std::domain_error(
      "InvertAmplificationEpsL: target eps " + std::to_string(eps_target) +
      " falls in the bound's unreachable gap (" + std::to_string(g_branch) +
      ", " + std::to_string(branch) + ") at this n and delta");
}

double Bc20DummyProb(double eps, double delta, int64_t n) {
  CheckBudgetInputs(eps, delta);
  if (eps > 2.0) {
    throw std::domain_error("Bc20DummyProb: requires eps in (0, 2]");
  }
  const double q1 =
      1.0 - 200.0 * std::log(4.0 / delta) / (eps * eps * static_cast<double>(n));
  if (q1 < 0.5) {
    throw std::domain_error(
        "Bc20DummyProb: requires n >= 400 log(4/delta) / eps^2 (q1 >= 1/2)");
  }
  return q1;
}

Cm22Params Cm22ParamsFor(double eps, double delta, int64_t n, double eps_l) {
  CheckBudgetInputs(eps, delta);
  if (!(eps_l > 0.0)) throw std::domain_error("Cm22ParamsFor: eps_l must be > 0");
  Cm22Params params;
  params.q2 = 1.0 / (std::exp(eps_l / 2.0) + 1.0);
  const double ratio = (std::exp(eps) + 1.0) / (std::exp(eps) - 1.0);
  const double required = 33.0 / (5.0 * static_cast<double>(n)) * ratio * ratio *
                          std::log(4.0 / delta);
  const int64_t xi_min = std::max<int64_t>(
      1, static_cast<int64_t>(std::ceil(required / (params.q2 * (1.0 - params.q2)))));
  params.xi = std::max<int64_t>(10, xi_min);
  return params;
}

double Lwy22DummyProb(double eps, double delta, int64_t n, int d) {
  CheckBudgetInputs(eps, delta);
  if (eps > 3.0) {
    throw std::domain_error("Lwy22DummyProb: requires eps in (0, 3]");
  }
  const double q3 = 32.0 * static_cast<double>(d) * std::log(2.0 / delta) /
                    (eps * eps * static_cast<double>(n));
  if (q3 > 1.0) {
    throw std::domain_error(
        "Lwy22DummyProb: requires n >= 32 d log(2/delta) / eps^2 (q3 <= 1)");
  }
  return q3;
}

double CollusionEpsilon(ProtocolKind kind, double target_eps, int64_t n,
                        int64_t omega_size, int d, double delta) {
  if (omega_size < 0 || omega_size >= n) {
    throw std::domain_error("CollusionEpsilon: omega_size must lie in [0, n)");
  }
  if (IsProposed(kind)) return target_eps;
  const int64_t remaining = n - omega_size;
  switch (kind) {
    case ProtocolKind::kGrrShuffle: {
      const double eps_l = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                   target_eps, n, d, delta);
      return GrrAmplification(eps_l, remaining, d, delta);
    }
    case ProtocolKind::kOueShuffle:
    case ProtocolKind::kOlhShuffle:
    case ProtocolKind::kRapporShuffle: {
      const double eps_l = InvertAmplificationEpsL(
          AmplificationBoundKind::kGeneral, target_eps, n, d, delta);
      return ShuffleAmplification(eps_l, remaining, delta);
    }
    case ProtocolKind::kBc20: {
      const double q1 = Bc20DummyProb(target_eps, delta, n);
      return std::sqrt(200.0 * std::log(4.0 / delta) /
                       ((1.0 - q1) * static_cast<double>(remaining)));
    }
    case ProtocolKind::kCm22: {
      const Cm22Params params = Cm22ParamsFor(target_eps, delta, n);
      const double c0 = std::sqrt(5.0 * static_cast<double>(remaining) *
                                  static_cast<double>(params.xi) * params.q2 *
                                  (1.0 - params.q2) /
                                  (33.0 * std::log(4.0 / delta)));
      if (c0 <= 1.0) return std::numeric_limits<double>::infinity();
      return std::log1p(2.0 / (c0 - 1.0));
    }
    case ProtocolKind::kLwy22: {
      const double q3 = Lwy22DummyProb(target_eps, delta, n, d);
      return std::sqrt(32.0 * static_cast<double>(d) * std::log(2.0 / delta) /
                       (q3 * static_cast<double>(remaining)));
    }
    default:
      throw std::invalid_argument("CollusionEpsilon: unsupported protocol");
  }
}

}  // namespace augshuffle
