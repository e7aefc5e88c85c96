// SPDX-License-Identifier: Apache-2.0
//
// Closed-form companion to the simulator: throughput scaling laws, the
// optimal pilot count, and the probability tools behind them (Lambert W,
// hypoexponential sums, extreme values, normal quantiles, kurtosis).
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "irsoc/channel.hpp"

namespace irsoc::analytic {

struct ScalingLawInput {
  double snr_ref = 1.0;   // beta * P / sigma^2, linear
  int n = 8;              // IRS elements
  double k = 100.0;       // users
  int q = 1;              // pilots
  double zeta = 0.0;      // pilot fraction
  int m = 1;              // subcarriers
  std::optional<PowerDelayProfile> pdp;
};

/// Principal branch W0 by Halley iteration. Throws std::domain_error below -1/e.
double lambert_w0(double x);

/// (1 - zeta q) log2(1 + snr (N+1) ln(q K)).
double rate_theorem1(const ScalingLawInput& in);
/// log2(1 + snr N^2 ln K), unit big-O constant.
double rate_theorem2(double snr_ref, int n, double k);

struct Theorem3Rate {
  double exact_quantile = 0.0;  // uses Phi^{-1}(1 - 1/K)
  double approximation = 0.0;   // uses sqrt(pi/2 ln K)
};
/// log2(1 + snr (N+1) [1 + ||a||_2 x]) for both choices of x.
Theorem3Rate rate_theorem3(const ScalingLawInput& in);
/// M log2(1 + (snr/M) (N+1) ln K).
double rate_theorem4(const ScalingLawInput& in);

struct OptimalQ {
  double q_hat = 1.0;      // root of the printed fixed-point relation
  int q_rounded = 1;       // better of floor/ceil(q_hat) under the Theorem-1 rate
  int q_star = 1;          // q_rounded unless the sweep finds a strictly better integer
  bool sweep_fallback = false;
  double q_stationary = 1.0;  // stationary point of the Theorem-1 rate in continuous q
  int q_sweep = 1;         // exhaustive integer argmax over [1, q_max]
  int q_max = 1;
  int iterations = 0;
};

/// q_hat solves log2(qK) = e^{W(1/(zeta q) - 1)} / (beta (N+1)). `beta` is the
/// SNR-normalised gain snr_ref; all integer results lie in [1, q_max] with
/// q_max = ceil(1/zeta) - 1. Throws std::runtime_error when the root search
/// does not converge in 10^4 iterations.
OptimalQ optimal_q(double k, int n, double zeta, double beta);

/// Largest feasible integer pilot count with zeta*q < 1.
int max_pilots(double zeta);

/// Hypoexponential law of a sum of independent exponentials with distinct means.
class HypoExpDist {
 public:
  explicit HypoExpDist(std::vector<double> means);
  const std::vector<double>& means() const { return means_; }
  double mean() const;
  double cdf(double y) const;
  double quantile(double p) const;

 private:
  std::vector<double> means_;
  std::vector<double> coeffs_;
};

double hypoexp_cdf(const HypoExpDist& dist, double y);
double hypoexp_quantile(const HypoExpDist& dist, double p);

/// Location l_K = mean ln(count) of the maximum of `count` exponentials.
double evt_location_exponential(double mean, double count);
/// Gumbel cdf exp(-exp(-x/c)).
double gumbel_cdf(double x, double scale);

double normal_cdf(double x);
/// Standard normal inverse cdf: rational approximation plus one Newton step.
double normal_quantile(double p);
/// Closed-form approximation 0.5 (1 + sqrt(1 - exp(-2 x^2 / pi))) for x >= 0.
double normal_cdf_approx(double x);

double excess_kurtosis(std::span<const double> samples);
/// 6 ||a||_4^4 / ||a||_2^4 for sum_l |h_{k,l}|^2 with h_{k,l} ~ CN(0, (N+1) a_l).
double excess_kurtosis_analytic(const PowerDelayProfile& pdp, int n = 0);

struct QBounds {
  double lower = 0.0;
  double q = 0.0;
  double upper = 0.0;
};
/// Q-function and its tail sandwich, valid for x > 1.
QBounds qfunction_bounds_check(double x);

/// 2 ||a||_3^3 / ||a||_2^3.
double lyapunov_condition(const PowerDelayProfile& pdp);

/// One-sample Kolmogorov-Smirnov statistic against `cdf`.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf);
/// Asymptotic Kolmogorov survival P(sqrt(n) D > lambda).
double kolmogorov_pvalue(double d, std::size_t n);

}  // namespace irsoc::analytic

#include "irsoc/analytic_inl.hpp"
