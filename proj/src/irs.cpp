// SPDX-License-Identifier: Apache-2.0
#include "irsoc/irs.hpp"

#include <cmath>
#include <stdexcept>

namespace irsoc {

double wrap_phase(double theta) {
  double w = std::fmod(theta, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  // fmod of a tiny negative number can round back up to exactly 2*pi.
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

PhaseConfig::PhaseConfig(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& t : theta_) t = wrap_phase(t);
}

CVec PhaseConfig::reflection() const {
  CVec r(theta_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i) r[i] = std::polar(1.0, theta_[i]);
  return r;
}

PhaseConfig sample_uniform_phases(int n, RngStream& rng) {
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (double& t : theta) t = rng.uniform(0.0, 2.0 * kPi);
  return PhaseConfig(std::move(theta));
}

PhaseConfig dod_phases(int n, double theta_a, double phi, double spacing_over_lambda) {
  std::vector<double> theta(static_cast<std::size_t>(n));
  const double slope = 2.0 * kPi * spacing_over_lambda * (std::sin(theta_a) + std::sin(phi));
  for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i)] = slope * i;
  return PhaseConfig(std::move(theta));
}

PhaseConfig sample_dod_aware_phases(int n, double theta_a, double phi_lo, double phi_hi,
                                    double spacing_over_lambda, RngStream& rng) {
  if (phi_lo > phi_hi || phi_lo <= -kPi / 2 || phi_hi >= kPi / 2) {
    throw std::invalid_argument("sample_dod_aware_phases: invalid direction support");
  }
  return dod_phases(n, theta_a, rng.uniform(phi_lo, phi_hi), spacing_over_lambda);
}

cd effective_channel_narrowband(std::span<const cd> reflection, const NarrowbandChannelSet& ch,
                                double beta_r, double beta_d, int k) {
  const auto h2 = ch.h2.row(k);
  cd acc{0.0, 0.0};
  for (std::size_t n = 0; n < reflection.size(); ++n) {
    acc += std::conj(h2[n]) * reflection[n] * ch.h1[n];
  }
  return std::sqrt(beta_r) * acc + std::sqrt(beta_d) * ch.hd[static_cast<std::size_t>(k)];
}

cd effective_channel_narrowband(const PhaseConfig& cfg, const NarrowbandChannelSet& ch,
                                const LinkBudget& budget, int k) {
  if (cfg.size() != ch.n_elements()) {
    throw std::invalid_argument("effective_channel_narrowband: dimension mismatch");
  }
  const CVec r = cfg.reflection();
  const auto idx = static_cast<std::size_t>(k);
  return effective_channel_narrowband(r, ch, budget.beta_r[idx], budget.beta_d[idx], k);
}

double steering_array_gain(std::span<const cd> reflection, double slope) {
  cd acc{0.0, 0.0};
  const cd step = std::polar(1.0, -slope);
  cd phasor{1.0, 0.0};
  for (std::size_t n = 0; n < reflection.size(); ++n) {
    acc += phasor * reflection[n];
    phasor *= step;
  }
  return std::norm(acc);
}

cd effective_channel_steering(const PhaseConfig& cfg, const SteeringChannelSet& ch, double beta,
                              int k) {
  const double slope = ch.phase_slope(k);
  cd acc{0.0, 0.0};
  const auto& theta = cfg.theta();
  for (std::size_t n = 0; n < theta.size(); ++n) {
    acc += std::polar(1.0, theta[n] - slope * static_cast<double>(n));
  }
  return std::sqrt(beta) * ch.h_prime[static_cast<std::size_t>(k)] * acc;
}

CVec effective_channel_wideband(std::span<const cd> reflection, const WidebandChannelSet& ch,
                                int k, double beta_r, double beta_d) {
  const int n_taps = ch.n_taps();
  const auto& h2 = ch.h2[static_cast<std::size_t>(k)];
  CVec out(static_cast<std::size_t>(n_taps), cd{0.0, 0.0});
  for (int e = 0; e < ch.n_elements(); ++e) {
    const cd w = reflection[static_cast<std::size_t>(e)] * ch.h1[static_cast<std::size_t>(e)];
    const auto taps = h2.row(e);
    for (int t = 0; t < n_taps; ++t) out[static_cast<std::size_t>(t)] += w * taps[static_cast<std::size_t>(t)];
  }
  const double sr = std::sqrt(beta_r);
  const double sd = std::sqrt(beta_d);
  for (int t = 0; t < n_taps; ++t) {
    out[static_cast<std::size_t>(t)] = sr * out[static_cast<std::size_t>(t)] + sd * ch.hd(k, t);
  }
  return out;
}

CVec effective_channel_wideband(const PhaseConfig& cfg, const WidebandChannelSet& ch, int k,
                                double beta_r, double beta_d) {
  if (cfg.size() != ch.n_elements()) {
    throw std::invalid_argument("effective_channel_wideband: dimension mismatch");
  }
  const CVec r = cfg.reflection();
  return effective_channel_wideband(r, ch, k, beta_r, beta_d);
}

double beamforming_gain(const NarrowbandChannelSet& ch, double beta_r, double beta_d, int k) {
  const auto h2 = ch.h2.row(k);
  double reflected = 0.0;
  for (std::size_t n = 0; n < ch.h1.size(); ++n) reflected += std::abs(ch.h1[n] * h2[n]);
  const double amp = std::sqrt(beta_r) * reflected +
                     std::sqrt(beta_d) * std::abs(ch.hd[static_cast<std::size_t>(k)]);
  return amp * amp;
}

BeamformingResult beamforming_oracle(const NarrowbandChannelSet& ch, const LinkBudget& budget,
                                     int k) {
  const auto idx = static_cast<std::size_t>(k);
  const auto h2 = ch.h2.row(k);
  const double direct_phase = std::arg(ch.hd[idx]);
  std::vector<double> theta(ch.h1.size());
  for (std::size_t n = 0; n < ch.h1.size(); ++n) {
    theta[n] = direct_phase - std::arg(std::conj(h2[n]) * ch.h1[n]);
  }
  BeamformingResult out;
  out.config = PhaseConfig(std::move(theta));
  out.gain = beamforming_gain(ch, budget.beta_r[idx], budget.beta_d[idx], k);
  out.rate = std::log2(1.0 + budget.p_over_sigma2 * out.gain);
  return out;
}

double users_required(double p_succ, double epsilon, int n, int q) {
  if (!(p_succ > 0.0 && p_succ < 1.0)) throw std::invalid_argument("p_succ must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon <= kPi)) throw std::invalid_argument("epsilon must lie in (0,pi]");
  return -std::log1p(-p_succ) * std::pow(kPi / epsilon, n) / q;
}

double success_probability(double epsilon, int n, double k, int q) {
  const double hit = std::pow(epsilon / kPi, n);
  return -std::expm1(k * q * std::log1p(-hit));
}

}  // namespace irsoc
