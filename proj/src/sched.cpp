// SPDX-License-Identifier: Apache-2.0
#include "irsoc/sched.hpp"

#include <cmath>
#include <stdexcept>

namespace irsoc {
namespace {

int id_bits(int count) {
  int bits = 0;
  while ((1LL << bits) < count) ++bits;
  return bits;
}

}  // namespace

SchedulerState::SchedulerState(int k, double initial_throughput)
    : t_k(static_cast<std::size_t>(k), initial_throughput) {}

double rate_from_gain(double gain, double p_over_sigma2) {
  return std::log2(1.0 + p_over_sigma2 * gain);
}

double instantaneous_rate(cd h, double p_over_sigma2) {
  return rate_from_gain(std::norm(h), p_over_sigma2);
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax over an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

int select_max_rate(std::span<const double> rates) { return argmax_lowest(rates); }

int select_pf(std::span<const double> rates, const SchedulerState& state) {
  if (rates.size() != state.t_k.size()) throw std::invalid_argument("select_pf: size mismatch");
  std::size_t best = 0;
  double best_metric = rates[0] / state.t_k[0];
  for (std::size_t k = 1; k < rates.size(); ++k) {
    const double metric = rates[k] / state.t_k[k];
    if (metric > best_metric) {
      best_metric = metric;
      best = k;
    }
  }
  return static_cast<int>(best);
}

int select_round_robin(const SchedulerState& state) {
  return static_cast<int>(state.slot_index % state.n_users());
}

void update_pf_state(SchedulerState& state, int selected, double rate, double tau) {
  const double keep = 1.0 - 1.0 / tau;
  for (double& t : state.t_k) t *= keep;
  state.t_k[static_cast<std::size_t>(selected)] += rate / tau;
  ++state.slot_index;
}

SlotDecision select_qpilot(std::span<const double> rates, int n_pilots,
                           const SchedulerState* state, double zeta) {
  if (n_pilots < 1 || rates.size() % static_cast<std::size_t>(n_pilots) != 0) {
    throw std::invalid_argument("select_qpilot: rate matrix shape");
  }
  if (zeta * n_pilots >= 1.0) {
    throw std::invalid_argument("select_qpilot: zeta * Q must be < 1");
  }
  const std::size_t q = static_cast<std::size_t>(n_pilots);
  const std::size_t k_users = rates.size() / q;
  SlotDecision d;
  double best = -1.0;
  for (std::size_t k = 0; k < k_users; ++k) {
    const double weight = state ? 1.0 / state->t_k[k] : 1.0;
    for (std::size_t p = 0; p < q; ++p) {
      const double metric = rates[k * q + p] * weight;
      if (metric > best) {
        best = metric;
        d.selected_user = static_cast<int>(k);
        d.selected_pilot = static_cast<int>(p);
      }
    }
  }
  const double raw = rates[static_cast<std::size_t>(d.selected_user) * q +
                           static_cast<std::size_t>(d.selected_pilot)];
  d.achieved_rate = (1.0 - zeta * n_pilots) * raw;
  d.feedback_bits = id_bits(static_cast<int>(k_users)) + id_bits(n_pilots);
  return d;
}

double subcarrier_sum_rate(std::span<const cd> freq, double snr_per_subcarrier) {
  double sum = 0.0;
  for (const cd& h : freq) sum += std::log2(1.0 + snr_per_subcarrier * std::norm(h));
  return sum;
}

SlotDecision select_su_ofdm(const CMatrix& freq_channels, std::span<const double> snr_per_user,
                            const SchedulerState* state) {
  const int k_users = freq_channels.rows();
  std::vector<double> sums(static_cast<std::size_t>(k_users));
  for (int k = 0; k < k_users; ++k) {
    sums[static_cast<std::size_t>(k)] =
        subcarrier_sum_rate(freq_channels.row(k), snr_per_user[static_cast<std::size_t>(k)]);
  }
  SlotDecision d;
  d.selected_user = state ? select_pf(sums, *state) : select_max_rate(sums);
  d.achieved_rate = sums[static_cast<std::size_t>(d.selected_user)];
  d.feedback_bits = id_bits(k_users);
  return d;
}

SlotDecision select_su_ofdm(const CMatrix& freq_channels, double snr_per_subcarrier,
                            const SchedulerState* state) {
  const std::vector<double> snr(static_cast<std::size_t>(freq_channels.rows()),
                                snr_per_subcarrier);
  return select_su_ofdm(freq_channels, snr, state);
}

SlotDecision select_ofdma(const CMatrix& freq_channels, std::span<const double> snr_per_user) {
  const int k_users = freq_channels.rows();
  const int m_sub = freq_channels.cols();
  SlotDecision d;
  d.subcarrier_users.assign(static_cast<std::size_t>(m_sub), 0);
  for (int m = 0; m < m_sub; ++m) {
    int best_k = 0;
    double best = snr_per_user[0] * std::norm(freq_channels(0, m));
    for (int k = 1; k < k_users; ++k) {
      const double g = snr_per_user[static_cast<std::size_t>(k)] * std::norm(freq_channels(k, m));
      if (g > best) {
        best = g;
        best_k = k;
      }
    }
    d.subcarrier_users[static_cast<std::size_t>(m)] = best_k;
    d.achieved_rate += std::log2(1.0 + best);
  }
  d.selected_user = d.subcarrier_users.empty() ? 0 : d.subcarrier_users[0];
  d.feedback_bits = m_sub * id_bits(k_users);
  return d;
}

SlotDecision select_ofdma(const CMatrix& freq_channels, double snr_per_subcarrier) {
  const std::vector<double> snr(static_cast<std::size_t>(freq_channels.rows()),
                                snr_per_subcarrier);
  return select_ofdma(freq_channels, snr);
}

}  // namespace irsoc
