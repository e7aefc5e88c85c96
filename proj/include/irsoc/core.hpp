// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration, geometry and link budget shared by every module.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irsoc/rng.hpp"

namespace irsoc {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a configuration value breaks an invariant. `key` names the
/// offending field so front ends can point at it.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Scheme {
  kUniformRandom,
  kQPilot,
  kChannelAware,
  kSuOfdm,
  kOfdma,
  kBeamforming,
  kNoIrs,
};

enum class SchedulerKind { kMaxRate, kProportionalFair, kRoundRobin };

/// Small-scale fading model for the narrowband schemes. ChannelAware always
/// uses the steering model; the wideband schemes use the tapped model.
enum class ChannelModel { kIidRayleigh, kSteering, kGaussMarkov };

/// Per-user path loss from positions, or one common beta for all users and
/// links (the setting every closed-form law assumes).
enum class PathLossMode { kPerUser, kEqual };

std::string_view to_string(Scheme s);
std::string_view to_string(SchedulerKind s);
std::string_view to_string(ChannelModel m);
std::string_view to_string(PathLossMode m);
Scheme parse_scheme(std::string_view s);
SchedulerKind parse_scheduler(std::string_view s);
ChannelModel parse_channel_model(std::string_view s);
PathLossMode parse_path_loss_mode(std::string_view s);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct Rect {
  Point lo;
  Point hi;
  Point centroid() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
};

struct PathLossExponents {
  double bs_irs = 2.0;
  double irs_user = 2.8;
  double bs_user = 3.6;
};

struct Geometry {
  Point bs_position{0.0, 0.0};
  Point irs_position{0.0, 250.0};
  Rect user_region{{100.0, 500.0}, {500.0, 1000.0}};
  PathLossExponents exponents;

  void validate() const;
};

struct SystemConfig {
  int n_irs_elements = 8;
  int n_users = 100;
  double tx_power_dbm = -10.0;
  double noise_dbm = -117.83;
  double pf_window_tau = 5000.0;
  double pilot_fraction_zeta = 0.01;
  Scheme scheme = Scheme::kUniformRandom;
  SchedulerKind scheduler = SchedulerKind::kProportionalFair;
  int n_slots = 500;
  int n_trials = 200;
  std::uint64_t master_seed = 1;
  double element_spacing_over_lambda = 0.5;

  ChannelModel channel_model = ChannelModel::kIidRayleigh;
  PathLossMode path_loss_mode = PathLossMode::kPerUser;
  /// Equal mode only: reference SNR beta*P/sigma^2 (per subcarrier for the
  /// wideband schemes). Unset means beta is the region-average direct gain.
  std::optional<double> equal_snr_db;
  int n_pilots = 1;
  double gauss_markov_alpha = 0.9;
  int n_taps = 25;
  double pdp_decay_nu = 1.0;
  int n_subcarriers = 1024;
  double doa_deg = 20.0;
  double dod_min_deg = -40.0;
  double dod_max_deg = 40.0;
  /// Initial long-term throughput T_k(0) of the PF scheduler.
  double pf_initial_throughput = 1.0;

  void validate() const;
};

/// Per-user large-scale gains, linear.
struct LinkBudget {
  std::vector<double> beta_r;
  std::vector<double> beta_d;
  std::vector<double> snr_ref;  // beta_d * P / sigma^2
  double p_over_sigma2 = 1.0;

  int n_users() const { return static_cast<int>(beta_d.size()); }
};

double db_to_linear(double x_db);
double linear_to_db(double x);
double dbm_to_watts(double x_dbm);
double thermal_noise_dbm(double temperature_k, double bandwidth_hz);
double path_loss(double distance_m, double exponent);

std::vector<Point> sample_user_positions(const Geometry& geometry, int k,
                                         RngStream& rng);

/// Gains through the IRS (BS-IRS times IRS-user) and on the direct link.
LinkBudget link_budget(const Geometry& geometry,
                       const std::vector<Point>& users, double tx_power_dbm,
                       double noise_dbm);

/// Equal-beta budget: every user gets beta_r = beta_d = beta.
LinkBudget equal_link_budget(int k, double beta, double tx_power_dbm,
                             double noise_dbm);

/// Mean direct-link gain over the user rectangle, by midpoint quadrature.
double mean_direct_gain(const Geometry& geometry, int grid = 200);

/// Common beta used in equal path-loss mode. `per_resource_share` divides the
/// transmit power (M for the wideband schemes).
double equal_mode_beta(const SystemConfig& cfg, const Geometry& geometry,
                       double per_resource_share = 1.0);

}  // namespace irsoc
