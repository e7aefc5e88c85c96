// SPDX-License-Identifier: Apache-2.0
#include "irsoc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "irsoc/core.hpp"

namespace irsoc::analytic {
namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr double kSqrt2Pi = 2.5066282746310002;

double w0_initial_guess(double x) {
  if (x < -0.32) {
    // Series about the branch point x = -1/e.
    const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  }
  if (x < 3.0) {
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double pilot_rate(double snr, int n, double k, int q, double zeta) {
  ScalingLawInput in;
  in.snr_ref = snr;
  in.n = n;
  in.k = k;
  in.q = q;
  in.zeta = zeta;
  return rate_theorem1(in);
}

// Derivative in q of (1 - zeta q) log2(1 + A ln(q K)).
double pilot_rate_slope(double a, double k, double q, double zeta) {
  const double inner = 1.0 + a * std::log(q * k);
  return -zeta * std::log2(inner) + (1.0 - zeta * q) * a / (q * inner * std::log(2.0));
}

template <typename F>
double bisect_increasing(F&& f, double lo, double hi, int& iterations, int max_iter) {
  // f(lo) < 0 < f(hi) on entry.
  for (; iterations < max_iter; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) return mid;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("optimal_q: root search did not converge");
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < -kInvE) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (x == -kInvE) return -1.0;
  if (std::isinf(x)) return x;
  double w = w0_initial_guess(x);
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double rate_theorem1(const ScalingLawInput& in) {
  const double pre = 1.0 - in.zeta * in.q;
  if (pre < 0.0) throw std::invalid_argument("rate_theorem1: zeta * q exceeds 1");
  if (pre == 0.0) return 0.0;
  const double lnqk = std::log(in.q * in.k);
  return pre * std::log2(1.0 + in.snr_ref * (in.n + 1) * lnqk);
}

double rate_theorem2(double snr_ref, int n, double k) {
  if (k < 2) throw std::invalid_argument("rate_theorem2: needs K >= 2");
  return std::log2(1.0 + snr_ref * static_cast<double>(n) * n * std::log(k));
}

Theorem3Rate rate_theorem3(const ScalingLawInput& in) {
  if (!in.pdp) throw std::invalid_argument("rate_theorem3: power delay profile required");
  if (in.k < 2) throw std::invalid_argument("rate_theorem3: needs K >= 2");
  const double a2 = in.pdp->norm(2.0);
  const double scale = in.snr_ref * (in.n + 1);
  Theorem3Rate r;
  r.exact_quantile = std::log2(1.0 + scale * (1.0 + a2 * normal_quantile(1.0 - 1.0 / in.k)));
  r.approximation = std::log2(1.0 + scale * (1.0 + a2 * std::sqrt(kPi / 2.0 * std::log(in.k))));
  return r;
}

double rate_theorem4(const ScalingLawInput& in) {
  if (in.m < 1) throw std::invalid_argument("rate_theorem4: needs M >= 1");
  if (in.k < 2) throw std::invalid_argument("rate_theorem4: needs K >= 2");
  return in.m * std::log2(1.0 + in.snr_ref / in.m * (in.n + 1) * std::log(in.k));
}

int max_pilots(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("zeta must lie in (0,1)");
  int q = static_cast<int>(std::floor(1.0 / zeta));
  while (q > 0 && zeta * q >= 1.0) --q;
  while (zeta * (q + 1) < 1.0) ++q;
  return std::max(q, 1);
}

OptimalQ optimal_q(double k, int n, double zeta, double beta) {
  if (k < 1 || n < 1) throw std::invalid_argument("optimal_q: needs K, N >= 1");
  if (!(beta > 0)) throw std::invalid_argument("optimal_q: beta must be > 0");
  OptimalQ out;
  out.q_max = max_pilots(zeta);
  const double scale = beta * (n + 1);

  // Printed relation: log2(qK) = e^{W(1/(zeta q) - 1)} / (beta (N+1)).
  const auto g = [&](double q) {
    return std::log2(q * k) - std::exp(lambert_w0(1.0 / (zeta * q) - 1.0)) / scale;
  };
  const double hi = 1.0 / zeta;
  constexpr int kMaxIter = 10000;
  if (g(1.0) >= 0.0) {
    out.q_hat = 1.0;
  } else if (g(hi) <= 0.0) {
    out.q_hat = hi;
  } else {
    // Damped fixed-point iteration q <- (1-d) q + d 2^{rhs}/K, then bisection.
    double q = 1.0;
    bool done = false;
    for (; out.iterations < 200; ++out.iterations) {
      const double target = std::exp2(std::exp(lambert_w0(1.0 / (zeta * q) - 1.0)) / scale) / k;
      const double next = 0.5 * q + 0.5 * target;
      if (!(next >= 1.0 && next < hi)) break;
      if (std::abs(next - q) <= 1e-12 * next) {
        q = next;
        done = true;
        break;
      }
      q = next;
    }
    out.q_hat = done ? q : bisect_increasing(g, 1.0, hi, out.iterations, kMaxIter);
  }

  const auto clamp_q = [&](double q) {
    return std::clamp(static_cast<int>(q), 1, out.q_max);
  };
  const int lo_q = clamp_q(std::floor(out.q_hat));
  const int hi_q = clamp_q(std::ceil(out.q_hat));
  out.q_rounded = pilot_rate(beta, n, k, hi_q, zeta) > pilot_rate(beta, n, k, lo_q, zeta) ? hi_q
                                                                                          : lo_q;

  if (pilot_rate_slope(scale, k, 1.0, zeta) <= 0.0) {
    out.q_stationary = 1.0;
  } else {
    int it = 0;
    out.q_stationary = bisect_increasing(
        [&](double q) { return -pilot_rate_slope(scale, k, q, zeta); }, 1.0, hi, it, kMaxIter);
  }

  double best = -1.0;
  for (int q = 1; q <= out.q_max; ++q) {
    const double r = pilot_rate(beta, n, k, q, zeta);
    if (r > best) {
      best = r;
      out.q_sweep = q;
    }
  }
  out.sweep_fallback = best > pilot_rate(beta, n, k, out.q_rounded, zeta);
  out.q_star = out.sweep_fallback ? out.q_sweep : out.q_rounded;
  return out;
}

HypoExpDist::HypoExpDist(std::vector<double> means) : means_(std::move(means)) {
  if (means_.empty()) throw std::invalid_argument("HypoExpDist: no means");
  const double max_mean = *std::max_element(means_.begin(), means_.end());
  for (double m : means_) {
    if (!(m > 0)) throw std::invalid_argument("HypoExpDist: means must be positive");
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    for (std::size_t j = i + 1; j < means_.size(); ++j) {
      if (std::abs(means_[i] - means_[j]) <= 1e-12 * max_mean) {
        throw std::invalid_argument("HypoExpDist: means must be distinct");
      }
    }
  }
  coeffs_.resize(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) {
    double c = 1.0;
    for (std::size_t j = 0; j < means_.size(); ++j) {
      if (j != i) c *= means_[i] / (means_[i] - means_[j]);
    }
    coeffs_[i] = c;
  }
}

double HypoExpDist::mean() const { return std::accumulate(means_.begin(), means_.end(), 0.0); }

double HypoExpDist::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  double conditioning = 0.0;
  for (double c : coeffs_) conditioning += std::abs(c);
  if (conditioning < 1e6) {
    double tail = 0.0;
    for (std::size_t i = 0; i < means_.size(); ++i) tail += coeffs_[i] * std::exp(-y / means_[i]);
    return std::clamp(1.0 - tail, 0.0, 1.0);
  }
  // Closely spaced means make the partial fractions cancel catastrophically;
  // uniformise the pure-birth chain through the L phases instead.
  const double rate_max = 1.0 / *std::min_element(means_.begin(), means_.end());
  const double lambda = rate_max * y;
  const std::size_t phases = means_.size();
  std::vector<double> state(phases + 1, 0.0);
  state[0] = 1.0;
  double log_pois = -lambda;  // log Poisson(0; lambda)
  double cdf = 0.0;
  double mass = 0.0;
  for (long step = 0;; ++step) {
    const double w = std::exp(log_pois);
    cdf += w * state[phases];
    mass += w;
    if ((1.0 - mass < 1e-16 && step > lambda) || step > 100000) break;
    for (std::size_t s = phases; s-- > 0;) {
      const double move = (1.0 / means_[s]) / rate_max;
      state[s + 1] += state[s] * move;
      state[s] *= 1.0 - move;
    }
    log_pois += std::log(lambda) - std::log(static_cast<double>(step + 1));
  }
  return std::clamp(cdf, 0.0, 1.0);
}

double HypoExpDist::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("hypoexp_quantile: p must lie in (0,1)");
  double lo = 0.0;
  double hi = mean();
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double hypoexp_cdf(const HypoExpDist& dist, double y) { return dist.cdf(y); }
double hypoexp_quantile(const HypoExpDist& dist, double p) { return dist.quantile(p); }

double evt_location_exponential(double mean, double count) {
  if (count < 2) throw std::invalid_argument("evt_location_exponential: count must be >= 2");
  return mean * std::log(count);
}

double gumbel_cdf(double x, double scale) { return std::exp(-std::exp(-x / scale)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement on Phi(x) - p, evaluated on the tail nearer to p.
  for (int i = 0; i < 2; ++i) {
    const double e = p > 0.5 ? (1.0 - p) - 0.5 * std::erfc(x / std::sqrt(2.0))
                             : 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * kSqrt2Pi * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
  }
  return x;
}

double normal_cdf_approx(double x) {
  const double s = std::sqrt(-std::expm1(-2.0 * x * x / kPi));
  return x >= 0.0 ? 0.5 * (1.0 + s) : 0.5 * (1.0 - s);
}

double excess_kurtosis(std::span<const double> samples) {
  if (samples.size() < 1000) {
    throw std::invalid_argument("excess_kurtosis: needs at least 1000 samples");
  }
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : samples) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

double excess_kurtosis_analytic(const PowerDelayProfile& pdp, int n) {
  if (n < 0) throw std::invalid_argument("excess_kurtosis_analytic: n must be >= 0");
  // (N+1) scales every cumulant uniformly and cancels in the ratio.
  const double a2 = pdp.norm(2.0);
  const double a4 = pdp.norm(4.0);
  return 6.0 * std::pow(a4, 4) / std::pow(a2, 4);
}

QBounds qfunction_bounds_check(double x) {
  if (!(x > 1.0)) throw std::invalid_argument("qfunction_bounds_check: needs x > 1");
  QBounds b;
  b.upper = std::exp(-x * x / 2.0) / (kSqrt2Pi * x);
  b.lower = b.upper * (1.0 - 1.0 / (x * x));
  b.q = 0.5 * std::erfc(x / std::sqrt(2.0));
  return b;
}

double lyapunov_condition(const PowerDelayProfile& pdp) {
  return 2.0 * std::pow(pdp.norm(3.0), 3) / std::pow(pdp.norm(2.0), 3);
}

double kolmogorov_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace irsoc::analytic
