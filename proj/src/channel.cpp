// SPDX-License-Identifier: Apache-2.0
#include "irsoc/channel.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "irsoc/core.hpp"

namespace irsoc {
namespace {

// FFTW planning is not thread-safe; executing a finished plan on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [m, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan forward(int m) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(static_cast<std::size_t>(m));
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(m));
    fftw_plan plan = fftw_plan_dft_1d(m, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(m, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

double SteeringChannelSet::phase_slope(int k) const {
  return 2.0 * kPi * spacing_over_lambda *
         (std::sin(theta_a) + std::sin(theta_d[static_cast<std::size_t>(k)]));
}

CVec steering_vector(int n, double angle_rad, double spacing_over_lambda) {
  CVec v(static_cast<std::size_t>(n));
  const double step = -2.0 * kPi * spacing_over_lambda * std::sin(angle_rad);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::polar(1.0, step * i);
  return v;
}

PowerDelayProfile::PowerDelayProfile(int n_taps, double nu) : nu_(nu) {
  if (n_taps < 1) throw std::invalid_argument("PowerDelayProfile: n_taps must be >= 1");
  if (!(nu > 0)) throw std::invalid_argument("PowerDelayProfile: nu must be > 0");
  taps_.resize(static_cast<std::size_t>(n_taps));
  for (int l = 1; l <= n_taps; ++l) {
    taps_[static_cast<std::size_t>(l - 1)] = std::exp(-nu * l / n_taps);
  }
  const double sum = std::accumulate(taps_.begin(), taps_.end(), 0.0);
  for (double& a : taps_) a /= sum;
}

PowerDelayProfile::PowerDelayProfile(std::vector<double> taps) : taps_(std::move(taps)) {
  if (taps_.empty()) throw std::invalid_argument("PowerDelayProfile: empty profile");
  for (double a : taps_) {
    if (!(a > 0)) throw std::invalid_argument("PowerDelayProfile: taps must be positive");
  }
}

double PowerDelayProfile::norm(double p) const {
  double acc = 0.0;
  for (double a : taps_) acc += std::pow(a, p);
  return std::pow(acc, 1.0 / p);
}

NarrowbandChannelSet gen_narrowband(int n, int k, RngStream& rng) {
  NarrowbandChannelSet ch;
  ch.h1.resize(static_cast<std::size_t>(n));
  for (auto& z : ch.h1) z = rng.complex_normal();
  ch.h2 = CMatrix(k, n);
  for (auto& z : ch.h2.data()) z = rng.complex_normal();
  ch.hd.resize(static_cast<std::size_t>(k));
  for (auto& z : ch.hd) z = rng.complex_normal();
  return ch;
}

void evolve_gauss_markov(std::span<cd> h, double alpha, RngStream& rng) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("gauss-markov alpha outside [0,1]");
  if (alpha == 1.0) return;
  const double innovation = std::sqrt(1.0 - alpha * alpha);
  for (auto& z : h) z = alpha * z + innovation * rng.complex_normal();
}

CVec evolve_gauss_markov(const CVec& prev, double alpha, RngStream& rng) {
  CVec next = prev;
  evolve_gauss_markov(std::span<cd>(next), alpha, rng);
  return next;
}

SteeringChannelSet gen_steering(int k, double theta_a, double dod_lo, double dod_hi,
                                double spacing_over_lambda, RngStream& rng) {
  if (dod_lo > dod_hi) throw std::invalid_argument("gen_steering: empty direction support");
  if (dod_lo <= -kPi / 2 || dod_hi >= kPi / 2) {
    throw std::invalid_argument("gen_steering: direction support must lie in (-pi/2, pi/2)");
  }
  SteeringChannelSet ch;
  ch.theta_a = theta_a;
  ch.spacing_over_lambda = spacing_over_lambda;
  ch.theta_d.resize(static_cast<std::size_t>(k));
  for (auto& t : ch.theta_d) t = rng.uniform(dod_lo, dod_hi);
  ch.h_prime.resize(static_cast<std::size_t>(k));
  redraw_steering_fading(ch, rng);
  return ch;
}

void redraw_steering_fading(SteeringChannelSet& ch, RngStream& rng) {
  for (auto& z : ch.h_prime) z = rng.complex_normal();
}

WidebandChannelSet gen_wideband(int n, int k, int l, double nu, RngStream& rng,
                                double doa_rad, double spacing_over_lambda) {
  WidebandChannelSet ch;
  ch.pdp = PowerDelayProfile(l, nu);
  ch.h1 = steering_vector(n, doa_rad, spacing_over_lambda);
  ch.h2.reserve(static_cast<std::size_t>(k));
  ch.hd = CMatrix(k, l);
  for (int u = 0; u < k; ++u) {
    CMatrix taps(n, l);
    for (int e = 0; e < n; ++e) {
      for (int t = 0; t < l; ++t) taps(e, t) = rng.complex_normal(ch.pdp[t]);
    }
    ch.h2.push_back(std::move(taps));
    for (int t = 0; t < l; ++t) ch.hd(u, t) = rng.complex_normal(ch.pdp[t]);
  }
  return ch;
}

CVec to_frequency_domain(std::span<const cd> taps, int m) {
  const int l = static_cast<int>(taps.size());
  if (m < l) throw std::invalid_argument("to_frequency_domain: M must be >= L");
  CVec in(static_cast<std::size_t>(m), cd{0.0, 0.0});
  std::copy(taps.begin(), taps.end(), in.begin());
  CVec out(static_cast<std::size_t>(m));
  fftw_execute_dft(plan_cache().forward(m), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace irsoc
