// SPDX-License-Identifier: Apache-2.0
//
// User selection: max-rate, proportional fair, round robin, multi-pilot
// selection, and the two wideband policies (SU-OFDM and OFDMA).
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "irsoc/channel.hpp"

namespace irsoc {

struct SchedulerState {
  std::vector<double> t_k;   // long-term average throughput per user
  long long slot_index = 0;

  SchedulerState() = default;
  SchedulerState(int k, double initial_throughput);
  int n_users() const { return static_cast<int>(t_k.size()); }
};

struct SlotDecision {
  int selected_user = 0;
  std::vector<int> subcarrier_users;  // OFDMA only
  int selected_pilot = 0;
  double achieved_rate = 0.0;
  int feedback_bits = 0;
};

double instantaneous_rate(cd h, double p_over_sigma2);
double rate_from_gain(double gain, double p_over_sigma2);

/// Index of the largest entry; ties go to the lowest index.
int argmax_lowest(std::span<const double> values);

int select_max_rate(std::span<const double> rates);
int select_pf(std::span<const double> rates, const SchedulerState& state);
int select_round_robin(const SchedulerState& state);

/// Exponential-window update of T_k; advances slot_index.
void update_pf_state(SchedulerState& state, int selected, double rate, double tau);

/// (k*, q*) over a K x Q rate matrix (row-major, one row per user). The
/// proportional-fair weighting applies when `state` is given. The achieved
/// rate carries the (1 - zeta*Q) pre-log.
SlotDecision select_qpilot(std::span<const double> rates, int n_pilots,
                           const SchedulerState* state, double zeta);

/// Sum over subcarriers of log2(1 + snr * |h[m]|^2).
double subcarrier_sum_rate(std::span<const cd> freq, double snr_per_subcarrier);

/// Whole band to the best user by sum rate (PF-weighted when `state` is set).
/// freq_channels is K x M.
SlotDecision select_su_ofdm(const CMatrix& freq_channels, double snr_per_subcarrier,
                            const SchedulerState* state = nullptr);
/// Per-user SNR variant, used with per-user path loss.
SlotDecision select_su_ofdm(const CMatrix& freq_channels, std::span<const double> snr_per_user,
                            const SchedulerState* state = nullptr);

/// Each subcarrier to its own strongest user.
SlotDecision select_ofdma(const CMatrix& freq_channels, double snr_per_subcarrier);
SlotDecision select_ofdma(const CMatrix& freq_channels, std::span<const double> snr_per_user);

}  // namespace irsoc
