// SPDX-License-Identifier: Apache-2.0
//
// Scenario orchestration: sweeps, Monte Carlo trials, analytic overlays and
// the result table written to CSV.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irsoc/core.hpp"

namespace irsoc {

enum class SweepAxis { kUsers, kElements, kPilots, kTaps };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

enum class ComparatorKind { kSimulated, kAnalytic, kBeamformingFairShare, kKurtosis };

/// One curve of a scenario. Text form:
///   sim:<scheme>[@key=value,...]
///   analytic:<law>[@key=value,...]   law in theorem1..theorem4, theorem3_approx
///   bf_fair_share[@key=value,...]
///   kurtosis:<empirical|analytic>[@key=value,...]
/// Overrides use the scenario-file keys; Q=auto picks the rate-maximising pilot count.
struct Comparator {
  ComparatorKind kind = ComparatorKind::kSimulated;
  Scheme scheme = Scheme::kUniformRandom;
  std::string law;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string label;
};

Comparator parse_comparator(std::string_view text);

struct Scenario {
  std::string name;
  SystemConfig config;
  Geometry geometry;
  SweepAxis axis = SweepAxis::kUsers;
  std::vector<double> values;
  std::vector<Comparator> comparators;

  /// Throws ConfigError naming the first failing key, including every
  /// comparator's overridden configuration at every sweep value.
  void validate() const;
};

struct ResultRow {
  double sweep = 0.0;
  std::string comparator;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  int n_trials = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  static constexpr std::string_view kCsvHeader = "sweep,comparator,mean_rate,stderr,n_trials,seed";
  std::string to_csv() const;
  /// Rows matching a comparator label, in sweep order.
  std::vector<ResultRow> series(std::string_view comparator) const;
};

struct RunOptions {
  int threads = 1;
};

/// Applies one scenario-file key to the configuration. Throws ConfigError for
/// unknown keys or malformed values.
void apply_setting(SystemConfig& cfg, Geometry& geometry, std::string_view key,
                   std::string_view value);

/// Configuration of one comparator at one sweep value (Q=auto resolved).
SystemConfig resolve_config(const Scenario& s, const Comparator& c, double sweep_value);

/// Reference SNR beta*P/sigma^2 of the equal-beta analysis, per subcarrier for
/// the wideband schemes.
double reference_snr(const SystemConfig& cfg, const Geometry& geometry);

/// Rate-maximising pilot count of the closed-form law at this configuration.
int auto_pilots(const SystemConfig& cfg, const Geometry& geometry);

/// Per-trial time-averaged served rate of `cfg.scheme`, ordered by trial index.
/// With `fair_share` set, the per-trial average of (1/K) sum_k R_k^BF instead.
std::vector<double> simulate_trials(const SystemConfig& cfg, const Geometry& geometry,
                                    bool fair_share, const RunOptions& opts = {});

/// Closed-form value of `law` at this configuration.
double analytic_value(std::string_view law, const SystemConfig& cfg, const Geometry& geometry);

/// Samples of sum_l |h_{k,l}|^2 from the wideband generator, for the kurtosis table.
std::vector<double> tap_energy_samples(const SystemConfig& cfg, std::uint64_t batch,
                                       std::size_t count);

ResultTable run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Gap between the beamforming fair share and the uniform-random rate, one
/// series "gap@N=<n>" per element count, paired across trials.
ResultTable fig2_gap(const Scenario& base, const std::vector<double>& k_values,
                     const std::vector<int>& n_values, const RunOptions& opts = {});
ResultTable fig3_q_sweep(const Scenario& base, int k, int n, double zeta,
                         const RunOptions& opts = {});
ResultTable fig5_fig6_channel_aware(const Scenario& base, const std::vector<double>& k_values,
                                    const std::vector<int>& n_values, const RunOptions& opts = {});
ResultTable fig7_ofdm(const Scenario& base, const std::vector<double>& k_values,
                      const std::vector<int>& n_values, int l, int m,
                      const RunOptions& opts = {});
/// Pooled excess kurtosis per L with batch-means standard error, next to the
/// closed form. `samples_per_l` is split into `base.config.n_trials` batches.
ResultTable table1_kurtosis(const Scenario& base, const std::vector<int>& l_values,
                            std::size_t samples_per_l, const RunOptions& opts = {});

/// fig1 .. fig7 and table1 with every default filled in.
std::vector<Scenario> builtin_scenarios();
/// Throws ConfigError("scenario", ...) for unknown names.
Scenario builtin_scenario(std::string_view name);

/// Scenario file: a flat JSON object of scenario-file keys plus "name",
/// "sweep_axis", "sweep_values" and "comparators". Errors carry the line.
Scenario scenario_from_json(std::string_view text, std::string_view source = "<string>");
Scenario load_scenario_file(const std::string& path);
/// 1-based line of the first occurrence of `key` (or an alias) as a JSON key
/// in `text`, 0 when absent.
int source_line_for_key(std::string_view text, std::string_view key);
/// Canonical scenario-file key for an alias such as K, N, Q, tau or zeta.
std::string canonical_key(std::string_view key);
std::string scenario_to_json(const Scenario& s);

/// Writes <out_dir>/<name>.csv and <name>.manifest.json.
void write_outputs(const Scenario& s, const ResultTable& table, const std::string& out_dir,
                   double wall_time_s);

std::string_view library_version();

}  // namespace irsoc
