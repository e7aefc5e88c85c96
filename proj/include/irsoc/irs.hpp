// SPDX-License-Identifier: Apache-2.0
//
// IRS phase configurations and the end-to-end channels they induce.
#pragma once

#include <vector>

#include "irsoc/channel.hpp"
#include "irsoc/core.hpp"

namespace irsoc {

/// Reflection phases theta_n, each wrapped into [0, 2*pi).
class PhaseConfig {
 public:
  PhaseConfig() = default;
  explicit PhaseConfig(std::vector<double> theta);

  int size() const { return static_cast<int>(theta_.size()); }
  const std::vector<double>& theta() const { return theta_; }
  /// e^{j theta_n} for every element.
  CVec reflection() const;

 private:
  std::vector<double> theta_;
};

double wrap_phase(double theta);

PhaseConfig sample_uniform_phases(int n, RngStream& rng);

/// One direction phi ~ U[phi_lo, phi_hi] per call, shared by all elements:
/// theta_i = 2*pi*(i-1)*d/lambda*(sin theta_A + sin phi).
PhaseConfig sample_dod_aware_phases(int n, double theta_a, double phi_lo, double phi_hi,
                                    double spacing_over_lambda, RngStream& rng);

/// Linear-phase configuration aimed at direction `phi`.
PhaseConfig dod_phases(int n, double theta_a, double phi, double spacing_over_lambda);

/// h_k = sqrt(beta_r) * sum_n conj(h2[k,n]) e^{j theta_n} h1[n] + sqrt(beta_d) * hd[k].
cd effective_channel_narrowband(const PhaseConfig& cfg, const NarrowbandChannelSet& ch,
                                const LinkBudget& budget, int k);
/// Same composition with precomputed reflection coefficients.
cd effective_channel_narrowband(std::span<const cd> reflection, const NarrowbandChannelSet& ch,
                                double beta_r, double beta_d, int k);

/// h_k = sqrt(beta) h'_k sum_n e^{-j (n-1) theta'_k + j theta_n}.
cd effective_channel_steering(const PhaseConfig& cfg, const SteeringChannelSet& ch, double beta,
                              int k);

/// |sum_n e^{-j((n-1) slope - theta_n)}|^2, the array gain of a steering channel.
double steering_array_gain(std::span<const cd> reflection, double slope);

/// Per-tap composite h_{k,l} = sqrt(beta_d) hd[k,l] + sqrt(beta_r) sum_i e^{j theta_i} h1[i] h2[k][i,l].
CVec effective_channel_wideband(const PhaseConfig& cfg, const WidebandChannelSet& ch, int k,
                                double beta_r = 1.0, double beta_d = 1.0);
CVec effective_channel_wideband(std::span<const cd> reflection, const WidebandChannelSet& ch,
                                int k, double beta_r = 1.0, double beta_d = 1.0);

struct BeamformingResult {
  PhaseConfig config;
  double rate = 0.0;   // bits/s/Hz
  double gain = 0.0;   // |h_k|^2 under the returned configuration
};

/// Co-phases every reflected product conj(h2[k,n]) h1[n] with the direct path.
BeamformingResult beamforming_oracle(const NarrowbandChannelSet& ch, const LinkBudget& budget,
                                     int k);

/// Beamforming gain (sqrt(beta_r) sum_n |h1[n] h2[k,n]| + sqrt(beta_d)|hd[k]|)^2.
double beamforming_gain(const NarrowbandChannelSet& ch, double beta_r, double beta_d, int k);

/// Users needed so that some user sees a configuration within epsilon of its
/// beamforming configuration with probability p_succ: -ln(1-p)(pi/eps)^N / Q.
double users_required(double p_succ, double epsilon, int n, int q = 1);

/// Exact success probability 1 - (1 - (eps/pi)^N)^(K Q).
double success_probability(double epsilon, int n, double k, int q = 1);

}  // namespace irsoc
