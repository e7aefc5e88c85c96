// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "doctest.h"
#include "irsoc/experiment.hpp"
#include "json.hpp"

using namespace irsoc;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Scenario small(const std::string& comparator) {
  Scenario s;
  s.name = "small";
  s.values = {4, 16};
  s.comparators = {parse_comparator(comparator)};
  s.config.n_trials = 4;
  s.config.n_slots = 30;
  return s;
}

std::string error_of(std::string_view text) {
  try {
    scenario_from_json(text, "in.json").validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("comparator grammar") {
  const Comparator a = parse_comparator("sim:qpilot@Q=auto,K=50");
  CHECK(a.kind == ComparatorKind::kSimulated);
  CHECK(a.scheme == Scheme::kQPilot);
  REQUIRE(a.overrides.size() == 2);
  CHECK(a.overrides[0].first == "Q");
  CHECK(a.overrides[0].second == "auto");
  CHECK(a.label == "sim:qpilot@Q=auto,K=50");

  CHECK(parse_comparator("analytic:theorem3_approx").kind == ComparatorKind::kAnalytic);
  CHECK(parse_comparator("bf_fair_share").kind == ComparatorKind::kBeamformingFairShare);
  CHECK(parse_comparator("kurtosis:analytic").kind == ComparatorKind::kKurtosis);
  CHECK_THROWS_AS(parse_comparator("analytic:theorem9"), ConfigError);
  CHECK_THROWS_AS(parse_comparator("sim:warp_drive"), ConfigError);
  CHECK_THROWS_AS(parse_comparator("sim:qpilot@Q"), ConfigError);
  CHECK_THROWS_AS(parse_comparator("sim:qpilot@bogus=1"), ConfigError);
}

TEST_CASE("key aliases and source lines") {
  CHECK(canonical_key("K") == "n_users");
  CHECK(canonical_key("zeta") == "pilot_fraction_zeta");
  CHECK(canonical_key("n_taps") == "n_taps");
  const std::string text = "{\n  \"name\": \"x\",\n  \"K\": 5,\n  \"scheme\": \"qpilot\"\n}\n";
  CHECK(source_line_for_key(text, "n_users") == 3);
  CHECK(source_line_for_key(text, "scheme") == 4);
  CHECK(source_line_for_key(text, "n_taps") == 0);
}

TEST_CASE("one value, one comparator, one trial, one slot") {
  Scenario s = small("sim:uniform_random");
  s.values = {3};
  s.config.n_trials = 1;
  s.config.n_slots = 1;
  const ResultTable t = run_scenario(s);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].sweep == 3);
  CHECK(t.rows[0].n_trials == 1);
  CHECK(t.rows[0].stderr_rate == 0.0);
  CHECK(t.rows[0].mean_rate > 0.0);
  const std::string csv = t.to_csv();
  CHECK(csv.rfind(std::string(ResultTable::kCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("tables are reproducible and independent of the thread count") {
  Scenario s = small("sim:qpilot@Q=2");
  s.comparators.push_back(parse_comparator("bf_fair_share"));
  s.comparators.push_back(parse_comparator("analytic:theorem1@Q=2"));
  const std::string a = run_scenario(s).to_csv();
  const std::string b = run_scenario(s).to_csv();
  const std::string c = run_scenario(s, {3}).to_csv();
  CHECK(a == b);
  CHECK(a == c);
  s.config.master_seed = 2;
  CHECK(run_scenario(s).to_csv() != a);
}

TEST_CASE("stderr is the sample deviation over sqrt(n)") {
  Scenario s = small("sim:uniform_random");
  s.values = {8};
  SystemConfig cfg = resolve_config(s, s.comparators[0], 8);
  const std::vector<double> per = simulate_trials(cfg, s.geometry, false);
  const double m = mean_of(per);
  double ss = 0.0;
  for (double x : per) ss += (x - m) * (x - m);
  const ResultRow row = run_scenario(s).rows.at(0);
  CHECK(row.mean_rate == doctest::Approx(m).epsilon(1e-14));
  CHECK(row.stderr_rate == doctest::Approx(std::sqrt(ss / (per.size() - 1)) / std::sqrt(per.size())).epsilon(1e-12));
}

TEST_CASE("common random numbers across comparators") {
  SystemConfig cfg;
  cfg.n_users = 8;
  cfg.n_trials = 6;
  cfg.n_slots = 50;
  const Geometry g;
  // The fair share depends on the channels only, so every scheme sees the same one.
  const std::vector<double> bf = simulate_trials(cfg, g, true);
  cfg.scheme = Scheme::kQPilot;
  cfg.n_pilots = 3;
  CHECK(simulate_trials(cfg, g, true) == bf);
  cfg.scheme = Scheme::kUniformRandom;
  cfg.n_pilots = 1;
  cfg.n_users = 9;
  CHECK(simulate_trials(cfg, g, true) != bf);

  // Q = 1 multi-pilot draws the same configuration as uniform random.
  cfg.n_users = 8;
  cfg.pilot_fraction_zeta = 0.0;
  const std::vector<double> ur = simulate_trials(cfg, g, false);
  cfg.scheme = Scheme::kQPilot;
  CHECK(simulate_trials(cfg, g, false) == ur);
}

TEST_CASE("scenario files") {
  const std::string good = R"({
  "name": "demo",
  "sweep_axis": "users",
  "sweep_values": [2, 4],
  "comparators": ["sim:qpilot@Q=auto", "analytic:theorem1@Q=auto"],
  "scheme": "qpilot",
  "path_loss": "equal",
  "snr_db": 3.0,
  "trials": 2,
  "slots": 5
})";
  const Scenario s = scenario_from_json(good, "demo.json");
  CHECK(s.name == "demo");
  CHECK(s.config.path_loss_mode == PathLossMode::kEqual);
  REQUIRE(s.config.equal_snr_db.has_value());
  CHECK(*s.config.equal_snr_db == 3.0);
  s.validate();
  const Scenario back = scenario_from_json(scenario_to_json(s), "echo");
  CHECK(scenario_to_json(back) == scenario_to_json(s));
  CHECK(run_scenario(back).to_csv() == run_scenario(s).to_csv());

  CHECK(error_of("{\n  \"name\": \"x\",\n  \"bogus\": 1\n}").rfind("in.json:3:", 0) == 0);
  CHECK(error_of("{\n  \"name\": \"x\",\n  \"K\": \"many\"\n}").rfind("in.json:3:", 0) == 0);
  CHECK(error_of("{\n  \"name\": \"x\",\n\n  \"K\": 4,,\n}").rfind("in.json:4:", 0) == 0);
  CHECK(error_of("[1, 2]").rfind("in.json:1:", 0) == 0);
  CHECK(error_of("{\n \"tx_power_mw\": -1\n}").rfind("in.json:2:", 0) == 0);

  Scenario bad = s;
  bad.values = {4, 2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.comparators.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.name = "../evil";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.comparators = {parse_comparator("sim:qpilot@Q=100")};
  bad.config.pilot_fraction_zeta = 0.01;
  try {
    bad.validate();
    FAIL("Q=100 accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "pilot_fraction_zeta");
  }
}

TEST_CASE("outputs on disk") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "irsoc_test_outputs";
  fs::remove_all(dir);
  Scenario s = small("sim:uniform_random");
  const ResultTable t = run_scenario(s);
  write_outputs(s, t, dir.string(), 0.25);
  std::ifstream csv(dir / "small.csv");
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == t.to_csv());
  std::ifstream mf(dir / "small.manifest.json");
  const auto m = nlohmann::json::parse(mf);
  CHECK(m["name"] == "small");
  CHECK(m["csv"] == "small.csv");
  CHECK(m["columns"].size() == 6);
  CHECK(m["wall_time_s"] == 0.25);
  CHECK(m["version"] == std::string(library_version()));
  CHECK(m["scenario"]["sweep_values"].size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("built-in scenarios") {
  const auto all = builtin_scenarios();
  CHECK(all.size() == 8);
  for (const Scenario& s : all) {
    CAPTURE(s.name);
    CHECK_NOTHROW(s.validate());
    CHECK(builtin_scenario(s.name).name == s.name);
  }
  CHECK_THROWS_AS(builtin_scenario("fig9"), ConfigError);
}

TEST_CASE("multi-user diversity is monotone in K") {
  Scenario s = small("sim:uniform_random");
  s.values = {2, 8, 32, 128};
  s.config.n_trials = 10;
  s.config.n_slots = 100;
  const auto rows = run_scenario(s).rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].mean_rate + 2.0 * (rows[i].stderr_rate + rows[i - 1].stderr_rate) >= rows[i - 1].mean_rate);
  }
}

TEST_CASE("random-weight baseline gains little from more antennas") {
  SystemConfig cfg;
  cfg.scheme = Scheme::kNoIrs;
  cfg.n_users = 16;
  cfg.n_trials = 10;
  cfg.n_slots = 300;
  const Geometry g;
  cfg.n_irs_elements = 2;
  const double few = mean_of(simulate_trials(cfg, g, false));
  cfg.n_irs_elements = 64;
  const double many = mean_of(simulate_trials(cfg, g, false));
  CHECK(many == doctest::Approx(few).epsilon(0.05));
}

TEST_CASE("beamforming gap shrinks with K and grows with N") {
  Scenario s = builtin_scenario("fig2");
  s.config.n_trials = 6;
  s.config.n_slots = 200;
  const ResultTable t = fig2_gap(s, {8, 64, 512}, {2, 4, 16});
  const auto g2 = t.series("gap@N=2");
  REQUIRE(g2.size() == 3);
  CHECK(g2[0].mean_rate > g2[1].mean_rate);
  CHECK(g2[1].mean_rate > g2[2].mean_rate);
  CHECK(t.series("gap@N=16")[1].mean_rate > t.series("gap@N=4")[1].mean_rate);
}

TEST_CASE("steering model ordering: direction-aware >= multi-pilot >= uniform random") {
  Scenario s = builtin_scenario("fig5");
  SystemConfig cfg = s.config;
  cfg.n_users = 100;
  cfg.n_irs_elements = 16;
  cfg.n_trials = 6;
  cfg.n_slots = 200;
  cfg.scheme = Scheme::kChannelAware;
  const double aware = mean_of(simulate_trials(cfg, s.geometry, false));
  cfg.scheme = Scheme::kQPilot;
  cfg.n_pilots = auto_pilots(cfg, s.geometry);
  const double pilots = mean_of(simulate_trials(cfg, s.geometry, false));
  cfg.scheme = Scheme::kUniformRandom;
  cfg.n_pilots = 1;
  const double uniform = mean_of(simulate_trials(cfg, s.geometry, false));
  CHECK(aware >= pilots);
  CHECK(pilots >= uniform);
}

TEST_CASE("pilot sweep vanishes at Q = 1/zeta") {
  Scenario s = builtin_scenario("fig3");
  s.config.n_trials = 2;
  s.config.n_slots = 20;
  const ResultTable t = fig3_q_sweep(s, 100, 8, 0.01);
  const auto law = t.series("analytic:theorem1");
  const auto sim = t.series("sim:qpilot");
  REQUIRE(law.size() == 99);
  REQUIRE(sim.size() == 99);
  CHECK(law.back().sweep == 99);
  // Pre-log 1 - 0.01 * 99 leaves one percent of the slot.
  CHECK(sim.back().mean_rate < 0.02 * sim.front().mean_rate);
  int turns = 0;
  for (std::size_t i = 2; i < law.size(); ++i) {
    turns += (law[i - 1].mean_rate - law[i - 2].mean_rate) * (law[i].mean_rate - law[i - 1].mean_rate) < 0;
  }
  CHECK(turns <= 1);
}

TEST_CASE("wideband schemes") {
  Scenario s = builtin_scenario("fig7");
  SystemConfig cfg = s.config;
  cfg.n_users = 30;
  cfg.n_subcarriers = 64;
  cfg.n_taps = 5;
  cfg.n_trials = 3;
  cfg.n_slots = 10;
  double prev_ofdma = 0.0, prev_su = 0.0;
  for (int n : {4, 16}) {
    cfg.n_irs_elements = n;
    cfg.scheme = Scheme::kOfdma;
    const std::vector<double> o = simulate_trials(cfg, s.geometry, false);
    cfg.scheme = Scheme::kSuOfdm;
    const std::vector<double> su = simulate_trials(cfg, s.geometry, false);
    for (std::size_t t = 0; t < o.size(); ++t) CHECK(o[t] >= su[t]);
    CHECK(mean_of(o) > prev_ofdma);
    CHECK(mean_of(su) > prev_su);
    prev_ofdma = mean_of(o);
    prev_su = mean_of(su);
  }
}

TEST_CASE("kurtosis table") {
  Scenario s = builtin_scenario("table1");
  s.config.n_trials = 4;
  const ResultTable t = table1_kurtosis(s, {10}, 200000);
  const auto emp = t.series("kurtosis:empirical");
  const auto ana = t.series("kurtosis:analytic");
  REQUIRE(emp.size() == 1);
  REQUIRE(ana.size() == 1);
  CHECK(std::abs(emp[0].mean_rate - 0.76) <= 0.08);
  CHECK(std::abs(emp[0].mean_rate - ana[0].mean_rate) <= 3.0 * emp[0].stderr_rate + 0.02);
}
