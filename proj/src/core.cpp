// SPDX-License-Identifier: Apache-2.0
#include "irsoc/core.hpp"

#include <cmath>
#include <string>

namespace irsoc {
namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             const char* key) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw ConfigError(key, std::string("unknown ") + key + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string_view enum_name(E e, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Scheme>, 7> kSchemes{{
    {"uniform_random", Scheme::kUniformRandom},
    {"qpilot", Scheme::kQPilot},
    {"channel_aware", Scheme::kChannelAware},
    {"su_ofdm", Scheme::kSuOfdm},
    {"ofdma", Scheme::kOfdma},
    {"beamforming", Scheme::kBeamforming},
    {"no_irs", Scheme::kNoIrs},
}};

constexpr std::array<std::pair<std::string_view, SchedulerKind>, 3> kSchedulers{{
    {"max_rate", SchedulerKind::kMaxRate},
    {"proportional_fair", SchedulerKind::kProportionalFair},
    {"round_robin", SchedulerKind::kRoundRobin},
}};

constexpr std::array<std::pair<std::string_view, ChannelModel>, 3> kModels{{
    {"iid", ChannelModel::kIidRayleigh},
    {"steering", ChannelModel::kSteering},
    {"gauss_markov", ChannelModel::kGaussMarkov},
}};

constexpr std::array<std::pair<std::string_view, PathLossMode>, 2> kModes{{
    {"per_user", PathLossMode::kPerUser},
    {"equal", PathLossMode::kEqual},
}};

void require(bool ok, const char* key, const std::string& msg) {
  if (!ok) throw ConfigError(key, std::string(key) + ": " + msg);
}

}  // namespace

std::string_view to_string(Scheme s) { return enum_name(s, kSchemes); }
std::string_view to_string(SchedulerKind s) { return enum_name(s, kSchedulers); }
std::string_view to_string(ChannelModel m) { return enum_name(m, kModels); }
std::string_view to_string(PathLossMode m) { return enum_name(m, kModes); }
Scheme parse_scheme(std::string_view s) { return parse_enum(s, kSchemes, "scheme"); }
SchedulerKind parse_scheduler(std::string_view s) {
  return parse_enum(s, kSchedulers, "scheduler");
}
ChannelModel parse_channel_model(std::string_view s) {
  return parse_enum(s, kModels, "channel_model");
}
PathLossMode parse_path_loss_mode(std::string_view s) {
  return parse_enum(s, kModes, "path_loss_mode");
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Geometry::validate() const {
  require(user_region.lo.x != user_region.hi.x || user_region.lo.y != user_region.hi.y,
          "user_region", "rectangle corners must be distinct");
  require(exponents.bs_irs > 0, "ple_bs_irs", "path-loss exponent must be > 0");
  require(exponents.irs_user > 0, "ple_irs_user", "path-loss exponent must be > 0");
  require(exponents.bs_user > 0, "ple_bs_user", "path-loss exponent must be > 0");
}

void SystemConfig::validate() const {
  require(n_irs_elements >= 1, "n_irs_elements", "must be >= 1");
  require(n_users >= 1, "n_users", "must be >= 1");
  require(std::isfinite(tx_power_dbm), "tx_power_dbm", "must be finite");
  require(std::isfinite(noise_dbm), "noise_dbm", "must be finite");
  require(pf_window_tau > 1.0, "pf_window_tau", "must be > 1");
  require(pilot_fraction_zeta >= 0.0 && pilot_fraction_zeta < 1.0,
          "pilot_fraction_zeta", "must lie in [0, 1)");
  require(n_slots >= 1, "n_slots", "must be >= 1");
  require(n_trials >= 1, "n_trials", "must be >= 1");
  require(element_spacing_over_lambda > 0, "element_spacing_over_lambda", "must be > 0");
  require(n_pilots >= 1, "n_pilots", "must be >= 1");
  if (scheme == Scheme::kQPilot) {
    require(pilot_fraction_zeta * n_pilots < 1.0, "pilot_fraction_zeta",
            "zeta * n_pilots must be < 1 (no data time left)");
  }
  require(gauss_markov_alpha >= 0.0 && gauss_markov_alpha <= 1.0,
          "gauss_markov_alpha", "must lie in [0, 1]");
  require(n_taps >= 1, "n_taps", "must be >= 1");
  require(pdp_decay_nu > 0, "pdp_decay_nu", "must be > 0");
  require(n_subcarriers >= n_taps, "n_subcarriers", "must be >= n_taps");
  const double limit = 90.0;
  require(dod_min_deg <= dod_max_deg, "dod_min_deg", "must not exceed dod_max_deg");
  require(dod_min_deg > -limit && dod_max_deg < limit, "dod_max_deg",
          "direction support must lie inside (-90, 90) degrees");
  require(doa_deg > -limit && doa_deg < limit, "doa_deg", "must lie inside (-90, 90) degrees");
  require(pf_initial_throughput > 0, "pf_initial_throughput", "must be > 0");
  if (equal_snr_db) require(std::isfinite(*equal_snr_db), "equal_snr_db", "must be finite");
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }
double dbm_to_watts(double x_dbm) { return db_to_linear(x_dbm) / 1000.0; }

double thermal_noise_dbm(double temperature_k, double bandwidth_hz) {
  return 10.0 * std::log10(kBoltzmann * temperature_k * bandwidth_hz / 1e-3);
}

double path_loss(double distance_m, double exponent) {
  return std::pow(distance_m, -exponent);
}

std::vector<Point> sample_user_positions(const Geometry& geometry, int k, RngStream& rng) {
  const Rect& r = geometry.user_region;
  std::vector<Point> users(static_cast<std::size_t>(k));
  for (auto& p : users) {
    p.x = rng.uniform(r.lo.x, r.hi.x);
    p.y = rng.uniform(r.lo.y, r.hi.y);
  }
  return users;
}

LinkBudget link_budget(const Geometry& geometry, const std::vector<Point>& users,
                       double tx_power_dbm, double noise_dbm) {
  LinkBudget b;
  b.p_over_sigma2 = db_to_linear(tx_power_dbm - noise_dbm);
  const double bs_irs = path_loss(distance(geometry.bs_position, geometry.irs_position),
                                  geometry.exponents.bs_irs);
  for (const Point& u : users) {
    b.beta_r.push_back(bs_irs *
                       path_loss(distance(geometry.irs_position, u), geometry.exponents.irs_user));
    b.beta_d.push_back(path_loss(distance(geometry.bs_position, u), geometry.exponents.bs_user));
    b.snr_ref.push_back(b.beta_d.back() * b.p_over_sigma2);
  }
  return b;
}

LinkBudget equal_link_budget(int k, double beta, double tx_power_dbm, double noise_dbm) {
  LinkBudget b;
  b.p_over_sigma2 = db_to_linear(tx_power_dbm - noise_dbm);
  b.beta_r.assign(static_cast<std::size_t>(k), beta);
  b.beta_d.assign(static_cast<std::size_t>(k), beta);
  b.snr_ref.assign(static_cast<std::size_t>(k), beta * b.p_over_sigma2);
  return b;
}

double mean_direct_gain(const Geometry& geometry, int grid) {
  const Rect& r = geometry.user_region;
  double acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Point p{r.lo.x + (i + 0.5) * (r.hi.x - r.lo.x) / grid,
                    r.lo.y + (j + 0.5) * (r.hi.y - r.lo.y) / grid};
      acc += path_loss(distance(geometry.bs_position, p), geometry.exponents.bs_user);
    }
  }
  return acc / (static_cast<double>(grid) * grid);
}

double equal_mode_beta(const SystemConfig& cfg, const Geometry& geometry,
                       double per_resource_share) {
  const double p_over_sigma2 = db_to_linear(cfg.tx_power_dbm - cfg.noise_dbm);
  if (cfg.equal_snr_db) {
    return db_to_linear(*cfg.equal_snr_db) * per_resource_share / p_over_sigma2;
  }
  return mean_direct_gain(geometry);
}

}  // namespace irsoc
