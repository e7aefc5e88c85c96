// SPDX-License-Identifier: Apache-2.0
#include "irsoc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <thread>

#include "irsoc/analytic.hpp"
#include "irsoc/channel.hpp"
#include "irsoc/irs.hpp"
#include "irsoc/sched.hpp"

namespace irsoc {
namespace {

constexpr double kDegToRad = kPi / 180.0;

bool is_wideband(Scheme s) { return s == Scheme::kSuOfdm || s == Scheme::kOfdma; }

bool uses_steering(const SystemConfig& cfg) {
  return cfg.scheme == Scheme::kChannelAware || cfg.channel_model == ChannelModel::kSteering;
}

LinkBudget trial_budget(const SystemConfig& cfg, const Geometry& geometry, std::uint64_t trial) {
  if (cfg.path_loss_mode == PathLossMode::kEqual) {
    const double share = is_wideband(cfg.scheme) ? cfg.n_subcarriers : 1.0;
    return equal_link_budget(cfg.n_users, equal_mode_beta(cfg, geometry, share), cfg.tx_power_dbm,
                             cfg.noise_dbm);
  }
  RngStream rng(cfg.master_seed, trial, 0, Purpose::kUserPositions);
  return link_budget(geometry, sample_user_positions(geometry, cfg.n_users, rng),
                     cfg.tx_power_dbm, cfg.noise_dbm);
}

class Scheduler {
 public:
  explicit Scheduler(const SystemConfig& cfg)
      : kind_(cfg.scheduler), tau_(cfg.pf_window_tau), state_(cfg.n_users, cfg.pf_initial_throughput) {}

  int choose(std::span<const double> rates) const {
    switch (kind_) {
      case SchedulerKind::kMaxRate: return select_max_rate(rates);
      case SchedulerKind::kProportionalFair: return select_pf(rates, state_);
      case SchedulerKind::kRoundRobin: return select_round_robin(state_);
    }
    return 0;
  }

  SlotDecision choose_pilot(std::span<const double> rates, int q, double zeta) const {
    if (kind_ == SchedulerKind::kRoundRobin) {
      const int k = select_round_robin(state_);
      const auto row = rates.subspan(static_cast<std::size_t>(k) * q, static_cast<std::size_t>(q));
      SlotDecision d;
      d.selected_user = k;
      d.selected_pilot = argmax_lowest(row);
      d.achieved_rate = (1.0 - zeta * q) * row[static_cast<std::size_t>(d.selected_pilot)];
      return d;
    }
    return select_qpilot(rates, q, kind_ == SchedulerKind::kProportionalFair ? &state_ : nullptr,
                         zeta);
  }

  const SchedulerState* pf_state() const {
    return kind_ == SchedulerKind::kProportionalFair ? &state_ : nullptr;
  }
  bool round_robin() const { return kind_ == SchedulerKind::kRoundRobin; }
  int round_robin_user() const { return select_round_robin(state_); }

  void commit(int k, double rate) {
    if (kind_ == SchedulerKind::kProportionalFair) {
      update_pf_state(state_, k, rate, tau_);
    } else {
      ++state_.slot_index;
    }
  }

 private:
  SchedulerKind kind_;
  double tau_;
  SchedulerState state_;
};

struct TrialOutcome {
  double served = 0.0;
  double fair_share = 0.0;
};

TrialOutcome run_narrowband(const SystemConfig& cfg, const LinkBudget& budget,
                            std::uint64_t trial) {
  const int n = cfg.n_irs_elements;
  const int k_users = cfg.n_users;
  const int q_count = cfg.scheme == Scheme::kQPilot ? cfg.n_pilots : 1;
  const double snr = budget.p_over_sigma2;
  Scheduler sched(cfg);
  NarrowbandChannelSet ch;
  std::vector<double> rates(static_cast<std::size_t>(k_users) * q_count);
  std::vector<double> weights(static_cast<std::size_t>(n));
  CVec precoder(static_cast<std::size_t>(n));
  TrialOutcome out;

  for (int slot = 0; slot < cfg.n_slots; ++slot) {
    RngStream crng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kChannel);
    if (slot == 0 || cfg.channel_model != ChannelModel::kGaussMarkov) {
      ch = gen_narrowband(n, k_users, crng);
    } else {
      evolve_gauss_markov(std::span<cd>(ch.h1), cfg.gauss_markov_alpha, crng);
      evolve_gauss_markov(ch.h2.data(), cfg.gauss_markov_alpha, crng);
      evolve_gauss_markov(std::span<cd>(ch.hd), cfg.gauss_markov_alpha, crng);
    }

    double bf_sum = 0.0;
    for (int k = 0; k < k_users; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      bf_sum += rate_from_gain(beamforming_gain(ch, budget.beta_r[ku], budget.beta_d[ku], k), snr);
    }
    out.fair_share += bf_sum / k_users;

    switch (cfg.scheme) {
      case Scheme::kUniformRandom:
      case Scheme::kQPilot:
        for (int q = 0; q < q_count; ++q) {
          RngStream prng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kPhases,
                         static_cast<std::uint64_t>(q));
          const CVec refl = sample_uniform_phases(n, prng).reflection();
          for (int k = 0; k < k_users; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const cd h = effective_channel_narrowband(refl, ch, budget.beta_r[ku], budget.beta_d[ku], k);
            rates[ku * q_count + static_cast<std::size_t>(q)] = instantaneous_rate(h, snr);
          }
        }
        break;
      case Scheme::kBeamforming:
        for (int k = 0; k < k_users; ++k) {
          const auto ku = static_cast<std::size_t>(k);
          rates[ku] = rate_from_gain(beamforming_gain(ch, budget.beta_r[ku], budget.beta_d[ku], k), snr);
        }
        break;
      case Scheme::kNoIrs: {
        // N transmit antennas, random power split on the simplex and random phases.
        RngStream brng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kBaseline);
        double total = 0.0;
        for (double& w : weights) total += (w = brng.exponential());
        for (int i = 0; i < n; ++i) {
          const auto iu = static_cast<std::size_t>(i);
          precoder[iu] = std::polar(std::sqrt(weights[iu] / total), brng.uniform(0.0, 2.0 * kPi));
        }
        for (int k = 0; k < k_users; ++k) {
          const auto ku = static_cast<std::size_t>(k);
          cd acc{0.0, 0.0};
          const auto row = ch.h2.row(k);
          for (int i = 0; i < n; ++i) acc += precoder[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(i)];
          rates[ku] = instantaneous_rate(std::sqrt(budget.beta_d[ku]) * acc, snr);
        }
        break;
      }
      default:
        throw ConfigError("scheme", "scheme is not a narrowband scheme");
    }

    if (cfg.scheme == Scheme::kQPilot) {
      const SlotDecision d = sched.choose_pilot(rates, q_count, cfg.pilot_fraction_zeta);
      out.served += d.achieved_rate;
      sched.commit(d.selected_user, d.achieved_rate);
    } else {
      const int k = sched.choose(rates);
      out.served += rates[static_cast<std::size_t>(k)];
      sched.commit(k, rates[static_cast<std::size_t>(k)]);
    }
  }
  out.served /= cfg.n_slots;
  out.fair_share /= cfg.n_slots;
  return out;
}

TrialOutcome run_steering(const SystemConfig& cfg, const LinkBudget& budget, std::uint64_t trial) {
  const int n = cfg.n_irs_elements;
  const int k_users = cfg.n_users;
  const int q_count = cfg.scheme == Scheme::kQPilot ? cfg.n_pilots : 1;
  const double snr = budget.p_over_sigma2;
  const double theta_a = cfg.doa_deg * kDegToRad;
  const double lo = cfg.dod_min_deg * kDegToRad;
  const double hi = cfg.dod_max_deg * kDegToRad;
  RngStream drng(cfg.master_seed, trial, 0, Purpose::kDirections);
  SteeringChannelSet ch = gen_steering(k_users, theta_a, lo, hi, cfg.element_spacing_over_lambda, drng);
  std::vector<double> slopes(static_cast<std::size_t>(k_users));
  for (int k = 0; k < k_users; ++k) slopes[static_cast<std::size_t>(k)] = ch.phase_slope(k);

  Scheduler sched(cfg);
  std::vector<double> rates(static_cast<std::size_t>(k_users) * q_count);
  const double n2 = static_cast<double>(n) * n;
  TrialOutcome out;

  for (int slot = 0; slot < cfg.n_slots; ++slot) {
    RngStream crng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kChannel);
    redraw_steering_fading(ch, crng);

    double bf_sum = 0.0;
    for (int k = 0; k < k_users; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      bf_sum += rate_from_gain(budget.beta_r[ku] * std::norm(ch.h_prime[ku]) * n2, snr);
    }
    out.fair_share += bf_sum / k_users;

    if (cfg.scheme == Scheme::kBeamforming) {
      for (int k = 0; k < k_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        rates[ku] = rate_from_gain(budget.beta_r[ku] * std::norm(ch.h_prime[ku]) * n2, snr);
      }
    } else {
      for (int q = 0; q < q_count; ++q) {
        RngStream prng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kPhases,
                       static_cast<std::uint64_t>(q));
        const PhaseConfig pc =
            cfg.scheme == Scheme::kChannelAware
                ? sample_dod_aware_phases(n, theta_a, lo, hi, cfg.element_spacing_over_lambda, prng)
                : sample_uniform_phases(n, prng);
        const CVec refl = pc.reflection();
        for (int k = 0; k < k_users; ++k) {
          const auto ku = static_cast<std::size_t>(k);
          const double gain = budget.beta_r[ku] * std::norm(ch.h_prime[ku]) *
                              steering_array_gain(refl, slopes[ku]);
          rates[ku * q_count + static_cast<std::size_t>(q)] = rate_from_gain(gain, snr);
        }
      }
    }

    if (cfg.scheme == Scheme::kQPilot) {
      const SlotDecision d = sched.choose_pilot(rates, q_count, cfg.pilot_fraction_zeta);
      out.served += d.achieved_rate;
      sched.commit(d.selected_user, d.achieved_rate);
    } else {
      const int k = sched.choose(rates);
      out.served += rates[static_cast<std::size_t>(k)];
      sched.commit(k, rates[static_cast<std::size_t>(k)]);
    }
  }
  out.served /= cfg.n_slots;
  out.fair_share /= cfg.n_slots;
  return out;
}

TrialOutcome run_wideband(const SystemConfig& cfg, const LinkBudget& budget, std::uint64_t trial) {
  const int k_users = cfg.n_users;
  const int m = cfg.n_subcarriers;
  const std::vector<double> snr(static_cast<std::size_t>(k_users),
                                budget.p_over_sigma2 / m);
  Scheduler sched(cfg);
  CMatrix freq(k_users, m);
  TrialOutcome out;
  for (int slot = 0; slot < cfg.n_slots; ++slot) {
    RngStream crng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kChannel);
    const WidebandChannelSet ch = gen_wideband(cfg.n_irs_elements, k_users, cfg.n_taps,
                                               cfg.pdp_decay_nu, crng, cfg.doa_deg * kDegToRad,
                                               cfg.element_spacing_over_lambda);
    RngStream prng(cfg.master_seed, trial, static_cast<std::uint64_t>(slot), Purpose::kPhases);
    const CVec refl = sample_uniform_phases(cfg.n_irs_elements, prng).reflection();
    for (int k = 0; k < k_users; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const CVec taps = effective_channel_wideband(refl, ch, k, budget.beta_r[ku], budget.beta_d[ku]);
      const CVec f = to_frequency_domain(taps, m);
      std::copy(f.begin(), f.end(), freq.row(k).begin());
    }
    SlotDecision d;
    if (cfg.scheme == Scheme::kOfdma) {
      d = select_ofdma(freq, snr);
    } else if (sched.round_robin()) {
      d.selected_user = sched.round_robin_user();
      d.achieved_rate = subcarrier_sum_rate(freq.row(d.selected_user), snr[0]);
    } else {
      d = select_su_ofdm(freq, snr, sched.pf_state());
    }
    out.served += d.achieved_rate;
    sched.commit(d.selected_user, d.achieved_rate);
  }
  out.served /= cfg.n_slots;
  return out;
}

TrialOutcome run_trial(const SystemConfig& cfg, const Geometry& geometry, std::uint64_t trial) {
  const LinkBudget budget = trial_budget(cfg, geometry, trial);
  if (is_wideband(cfg.scheme)) return run_wideband(cfg, budget, trial);
  if (uses_steering(cfg)) return run_steering(cfg, budget, trial);
  return run_narrowband(cfg, budget, trial);
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

void set_axis(SystemConfig& cfg, SweepAxis axis, double value) {
  const int v = static_cast<int>(std::lround(value));
  switch (axis) {
    case SweepAxis::kUsers: cfg.n_users = v; break;
    case SweepAxis::kElements: cfg.n_irs_elements = v; break;
    case SweepAxis::kPilots: cfg.n_pilots = v; break;
    case SweepAxis::kTaps: cfg.n_taps = v; break;
  }
}

bool is_pilot_key(std::string_view key) { return key == "Q" || key == "n_pilots"; }

ResultRow make_row(double sweep, const std::string& label, const std::vector<double>& xs,
                   std::uint64_t seed) {
  const auto [mean, se] = mean_and_stderr(xs);
  return {sweep, label, mean, se, static_cast<int>(xs.size()), seed};
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double pooled_kurtosis(const std::vector<std::vector<double>>& batches) {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.size();
  std::vector<double> all;
  all.reserve(total);
  for (const auto& b : batches) all.insert(all.end(), b.begin(), b.end());
  return analytic::excess_kurtosis(all);
}

}  // namespace

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kUsers: return "users";
    case SweepAxis::kElements: return "elements";
    case SweepAxis::kPilots: return "pilots";
    case SweepAxis::kTaps: return "taps";
  }
  return "users";
}

SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "users" || s == "K") return SweepAxis::kUsers;
  if (s == "elements" || s == "N") return SweepAxis::kElements;
  if (s == "pilots" || s == "Q") return SweepAxis::kPilots;
  if (s == "taps" || s == "L") return SweepAxis::kTaps;
  throw ConfigError("sweep_axis", "unknown sweep axis '" + std::string(s) + "'");
}

Comparator parse_comparator(std::string_view text) {
  Comparator c;
  c.label = std::string(text);
  const std::size_t at = text.find('@');
  const std::string_view head = text.substr(0, at);
  if (head == "bf_fair_share") {
    c.kind = ComparatorKind::kBeamformingFairShare;
  } else if (head.rfind("sim:", 0) == 0) {
    c.kind = ComparatorKind::kSimulated;
    c.scheme = parse_scheme(head.substr(4));
  } else if (head.rfind("analytic:", 0) == 0) {
    c.kind = ComparatorKind::kAnalytic;
    c.law = std::string(head.substr(9));
    static constexpr std::string_view kLaws[] = {"theorem1", "theorem2", "theorem3",
                                                 "theorem3_approx", "theorem4"};
    if (std::find(std::begin(kLaws), std::end(kLaws), c.law) == std::end(kLaws)) {
      throw ConfigError("comparators", "unknown law '" + c.law + "'");
    }
  } else if (head.rfind("kurtosis:", 0) == 0) {
    c.kind = ComparatorKind::kKurtosis;
    c.law = std::string(head.substr(9));
    if (c.law != "empirical" && c.law != "analytic") {
      throw ConfigError("comparators", "kurtosis comparator must be empirical or analytic");
    }
  } else {
    throw ConfigError("comparators", "unknown comparator '" + std::string(text) + "'");
  }
  if (at != std::string_view::npos) {
    std::string_view rest = text.substr(at + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("comparators", "override '" + std::string(item) + "' is not key=value");
      }
      c.overrides.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      const auto& [key, value] = c.overrides.back();
      if (!(is_pilot_key(key) && value == "auto")) {
        SystemConfig scratch;
        Geometry scratch_geometry;
        try {
          apply_setting(scratch, scratch_geometry, key, value);
        } catch (const ConfigError& e) {
          throw ConfigError("comparators", std::string(text) + ": " + e.what());
        }
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return c;
}

SystemConfig resolve_config(const Scenario& s, const Comparator& c, double sweep_value) {
  SystemConfig cfg = s.config;
  Geometry geo = s.geometry;
  set_axis(cfg, s.axis, sweep_value);
  if (c.kind == ComparatorKind::kSimulated) cfg.scheme = c.scheme;
  bool auto_q = false;
  for (const auto& [key, value] : c.overrides) {
    if (is_pilot_key(key) && value == "auto") {
      auto_q = true;
      continue;
    }
    apply_setting(cfg, geo, key, value);
  }
  if (auto_q) cfg.n_pilots = auto_pilots(cfg, s.geometry);
  return cfg;
}

double reference_snr(const SystemConfig& cfg, const Geometry& geometry) {
  const double share = is_wideband(cfg.scheme) ? cfg.n_subcarriers : 1.0;
  const double p_over_sigma2 = db_to_linear(cfg.tx_power_dbm - cfg.noise_dbm);
  return equal_mode_beta(cfg, geometry, share) * p_over_sigma2 / share;
}

int auto_pilots(const SystemConfig& cfg, const Geometry& geometry) {
  return analytic::optimal_q(cfg.n_users, cfg.n_irs_elements, cfg.pilot_fraction_zeta,
                             reference_snr(cfg, geometry))
      .q_star;
}

std::vector<double> simulate_trials(const SystemConfig& cfg, const Geometry& geometry,
                                    bool fair_share, const RunOptions& opts) {
  cfg.validate();
  geometry.validate();
  if (fair_share && is_wideband(cfg.scheme)) {
    throw ConfigError("comparators", "beamforming fair share is defined for narrowband schemes only");
  }
  std::vector<double> out(static_cast<std::size_t>(cfg.n_trials));
  parallel_for(out.size(), opts.threads, [&](std::size_t t) {
    const TrialOutcome r = run_trial(cfg, geometry, t);
    out[t] = fair_share ? r.fair_share : r.served;
  });
  return out;
}

double analytic_value(std::string_view law, const SystemConfig& cfg, const Geometry& geometry) {
  analytic::ScalingLawInput in;
  in.snr_ref = reference_snr(cfg, geometry);
  in.n = cfg.n_irs_elements;
  in.k = cfg.n_users;
  in.q = cfg.n_pilots;
  in.zeta = cfg.pilot_fraction_zeta;
  in.m = cfg.n_subcarriers;
  if (law == "theorem1") return analytic::rate_theorem1(in);
  if (law == "theorem2") return analytic::rate_theorem2(in.snr_ref, in.n, in.k);
  if (law == "theorem3" || law == "theorem3_approx") {
    // Wideband reference SNR is per subcarrier; the bound is M times the per-subcarrier law.
    SystemConfig wide = cfg;
    wide.scheme = Scheme::kSuOfdm;
    in.snr_ref = reference_snr(wide, geometry);
    in.pdp = PowerDelayProfile(cfg.n_taps, cfg.pdp_decay_nu);
    const auto r = analytic::rate_theorem3(in);
    return cfg.n_subcarriers * (law == "theorem3" ? r.exact_quantile : r.approximation);
  }
  if (law == "theorem4") {
    SystemConfig wide = cfg;
    wide.scheme = Scheme::kOfdma;
    in.snr_ref = reference_snr(wide, geometry) * cfg.n_subcarriers;
    return analytic::rate_theorem4(in);
  }
  throw ConfigError("comparators", "unknown law '" + std::string(law) + "'");
}

std::vector<double> tap_energy_samples(const SystemConfig& cfg, std::uint64_t batch,
                                       std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  const int k_users = cfg.n_users;
  const double scale = 1.0 / (cfg.n_irs_elements + 1);
  for (std::uint64_t slot = 0; out.size() < count; ++slot) {
    RngStream crng(cfg.master_seed, batch, slot, Purpose::kChannel);
    const WidebandChannelSet ch =
        gen_wideband(cfg.n_irs_elements, k_users, cfg.n_taps, cfg.pdp_decay_nu, crng,
                     cfg.doa_deg * kDegToRad, cfg.element_spacing_over_lambda);
    RngStream prng(cfg.master_seed, batch, slot, Purpose::kPhases);
    const CVec refl = sample_uniform_phases(cfg.n_irs_elements, prng).reflection();
    for (int k = 0; k < k_users && out.size() < count; ++k) {
      double e = 0.0;
      for (const cd& h : effective_channel_wideband(refl, ch, k)) e += std::norm(h);
      out.push_back(e * scale);
    }
  }
  return out;
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("name", "scenario name must not be empty");
  for (char ch : name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) {
      throw ConfigError("name", "scenario name may only contain letters, digits, '_' and '-'");
    }
  }
  if (values.empty()) throw ConfigError("sweep_values", "sweep needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 1) || values[i] != std::floor(values[i])) {
      throw ConfigError("sweep_values", "sweep values must be positive integers");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw ConfigError("sweep_values", "sweep values must be strictly increasing");
    }
  }
  if (comparators.empty()) throw ConfigError("comparators", "at least one comparator is required");
  config.validate();
  geometry.validate();
  for (const Comparator& c : comparators) {
    for (double v : values) {
      const SystemConfig cfg = resolve_config(*this, c, v);
      cfg.validate();
      if (c.kind == ComparatorKind::kBeamformingFairShare && is_wideband(cfg.scheme)) {
        throw ConfigError("comparators", "bf_fair_share needs a narrowband scheme");
      }
    }
  }
}

std::string ResultTable::to_csv() const {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += format_number(r.sweep);
    out += ',';
    out += r.comparator;
    out += ',';
    out += format_number(r.mean_rate);
    out += ',';
    out += format_number(r.stderr_rate);
    out += ',';
    out += std::to_string(r.n_trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> ResultTable::series(std::string_view comparator) const {
  std::vector<ResultRow> out;
  for (const ResultRow& r : rows) {
    if (r.comparator == comparator) out.push_back(r);
  }
  return out;
}

ResultTable run_scenario(const Scenario& s, const RunOptions& opts) {
  s.validate();
  ResultTable table;
  for (double v : s.values) {
    for (const Comparator& c : s.comparators) {
      const SystemConfig cfg = resolve_config(s, c, v);
      switch (c.kind) {
        case ComparatorKind::kSimulated:
        case ComparatorKind::kBeamformingFairShare:
          table.rows.push_back(make_row(
              v, c.label,
              simulate_trials(cfg, s.geometry, c.kind == ComparatorKind::kBeamformingFairShare, opts),
              cfg.master_seed));
          break;
        case ComparatorKind::kAnalytic:
          table.rows.push_back({v, c.label, analytic_value(c.law, cfg, s.geometry), 0.0, 0,
                                cfg.master_seed});
          break;
        case ComparatorKind::kKurtosis:
          if (c.law == "analytic") {
            table.rows.push_back(
                {v, c.label,
                 analytic::excess_kurtosis_analytic(PowerDelayProfile(cfg.n_taps, cfg.pdp_decay_nu),
                                                    cfg.n_irs_elements),
                 0.0, 0, cfg.master_seed});
          } else {
            const std::size_t per_batch =
                static_cast<std::size_t>(cfg.n_slots) * static_cast<std::size_t>(cfg.n_users);
            std::vector<std::vector<double>> batches(static_cast<std::size_t>(cfg.n_trials));
            parallel_for(batches.size(), opts.threads, [&](std::size_t b) {
              batches[b] = tap_energy_samples(cfg, b, per_batch);
            });
            std::vector<double> per(batches.size());
            for (std::size_t b = 0; b < batches.size(); ++b) {
              per[b] = analytic::excess_kurtosis(batches[b]);
            }
            const double se = mean_and_stderr(per).second;
            table.rows.push_back({v, c.label, pooled_kurtosis(batches), se, cfg.n_trials,
                                  cfg.master_seed});
          }
          break;
      }
    }
  }
  return table;
}

ResultTable fig2_gap(const Scenario& base, const std::vector<double>& k_values,
                     const std::vector<int>& n_values, const RunOptions& opts) {
  Scenario s = base;
  s.axis = SweepAxis::kUsers;
  s.values = k_values;
  s.comparators = {parse_comparator("sim:uniform_random")};
  s.validate();
  ResultTable table;
  for (double k : k_values) {
    for (int n : n_values) {
      SystemConfig cfg = resolve_config(s, s.comparators[0], k);
      cfg.n_irs_elements = n;
      const std::vector<double> oc = simulate_trials(cfg, s.geometry, false, opts);
      const std::vector<double> bf = simulate_trials(cfg, s.geometry, true, opts);
      std::vector<double> gap(oc.size());
      for (std::size_t t = 0; t < gap.size(); ++t) gap[t] = bf[t] - oc[t];
      table.rows.push_back(make_row(k, "gap@N=" + std::to_string(n), gap, cfg.master_seed));
    }
  }
  return table;
}

ResultTable fig3_q_sweep(const Scenario& base, int k, int n, double zeta, const RunOptions& opts) {
  Scenario s = base;
  s.config.n_users = k;
  s.config.n_irs_elements = n;
  s.config.pilot_fraction_zeta = zeta;
  s.config.path_loss_mode = PathLossMode::kEqual;
  s.axis = SweepAxis::kPilots;
  s.values.clear();
  for (int q = 1; q <= analytic::max_pilots(zeta); ++q) s.values.push_back(q);
  s.comparators = {parse_comparator("sim:qpilot"), parse_comparator("analytic:theorem1")};
  return run_scenario(s, opts);
}

ResultTable fig5_fig6_channel_aware(const Scenario& base, const std::vector<double>& k_values,
                                    const std::vector<int>& n_values, const RunOptions& opts) {
  Scenario s = base;
  s.axis = SweepAxis::kUsers;
  s.values = k_values;
  s.config.channel_model = ChannelModel::kSteering;
  s.comparators.clear();
  for (int n : n_values) {
    const std::string at = "@N=" + std::to_string(n);
    s.comparators.push_back(parse_comparator("sim:channel_aware" + at));
    s.comparators.push_back(parse_comparator("sim:uniform_random" + at));
    s.comparators.push_back(parse_comparator("bf_fair_share" + at));
  }
  return run_scenario(s, opts);
}

ResultTable fig7_ofdm(const Scenario& base, const std::vector<double>& k_values,
                      const std::vector<int>& n_values, int l, int m, const RunOptions& opts) {
  Scenario s = base;
  s.axis = SweepAxis::kUsers;
  s.values = k_values;
  s.config.n_taps = l;
  s.config.n_subcarriers = m;
  s.config.path_loss_mode = PathLossMode::kEqual;
  s.comparators.clear();
  for (int n : n_values) {
    const std::string at = "@N=" + std::to_string(n);
    for (const char* head : {"sim:ofdma", "sim:su_ofdm", "analytic:theorem4", "analytic:theorem3"}) {
      s.comparators.push_back(parse_comparator(head + at));
    }
  }
  return run_scenario(s, opts);
}

ResultTable table1_kurtosis(const Scenario& base, const std::vector<int>& l_values,
                            std::size_t samples_per_l, const RunOptions& opts) {
  Scenario s = base;
  s.axis = SweepAxis::kTaps;
  s.values.assign(l_values.begin(), l_values.end());
  const std::size_t batches = static_cast<std::size_t>(std::max(s.config.n_trials, 2));
  s.config.n_trials = static_cast<int>(batches);
  s.config.n_slots = static_cast<int>(
      (samples_per_l + batches * s.config.n_users - 1) / (batches * s.config.n_users));
  s.config.n_subcarriers = std::max(s.config.n_subcarriers, *std::max_element(l_values.begin(), l_values.end()));
  s.comparators = {parse_comparator("kurtosis:empirical"), parse_comparator("kurtosis:analytic")};
  return run_scenario(s, opts);
}

std::string_view library_version() {
#ifdef IRSOC_VERSION
  return IRSOC_VERSION;
#else
  return "0.0.0";
#endif
}

}  // namespace irsoc
