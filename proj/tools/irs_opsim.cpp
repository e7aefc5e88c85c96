// SPDX-License-Identifier: Apache-2.0
//
// irs-opsim: run built-in or file-defined scenarios, evaluate closed-form laws,
// and validate scenario files.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irsoc/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Loaded {
  irsoc::Scenario scenario;
  std::string text;    // source document, empty for built-ins
  std::string source;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw irsoc::ConfigError("config", path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Loaded load(const std::string& scenario, const std::string& config) {
  Loaded l;
  const std::string& path = !config.empty() ? config : scenario;
  if (!config.empty() || std::filesystem::is_regular_file(scenario)) {
    l.text = read_file(path);
    l.source = path;
    l.scenario = irsoc::scenario_from_json(l.text, path);
  } else {
    l.scenario = irsoc::builtin_scenario(scenario);
    l.source = scenario;
  }
  return l;
}

void apply_sets(irsoc::Scenario& s, const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw irsoc::ConfigError("set", "--set " + kv + ": expected key=value");
    }
    try {
      irsoc::apply_setting(s.config, s.geometry, kv.substr(0, eq), kv.substr(eq + 1));
    } catch (const irsoc::ConfigError& e) {
      throw irsoc::ConfigError(e.key(), "--set " + kv + ": " + e.what());
    }
  }
}

// Invariant failures are reported against the line of the offending key.
void validate_loaded(const Loaded& l) {
  try {
    l.scenario.validate();
  } catch (const irsoc::ConfigError& e) {
    if (l.text.empty()) throw;
    const int line = irsoc::source_line_for_key(l.text, e.key());
    std::string where = l.source;
    if (line > 0) where += ":" + std::to_string(line);
    throw irsoc::ConfigError(e.key(), where + ": " + e.what());
  }
}

int fail(int code, const std::string& msg) {
  std::cerr << "irs-opsim: error: " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator and closed-form companion for IRS-assisted opportunistic scheduling"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string scenario;
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<int> trials;
  int threads = 1;
  std::string law;

  auto* run = app.add_subcommand("run", "Run a scenario and write <name>.csv and <name>.manifest.json");
  auto* scen_opt = run->add_option("--scenario", scenario, "Built-in scenario name or scenario file");
  auto* cfg_opt = run->add_option("--config", config, "Scenario file (JSON)")->check(CLI::ExistingFile);
  scen_opt->excludes(cfg_opt);
  run->add_option("--set", sets, "Override key=value (repeatable)")->take_all();
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--trials", trials, "Number of Monte Carlo trials")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads")
      ->envname("IRS_OPSIM_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  auto* an = app.add_subcommand("analytic", "Evaluate a closed-form law and print its value");
  an->add_option("--law", law, "theorem1 | theorem2 | theorem3 | theorem3_approx | theorem4")->required();
  an->add_option("--set", sets, "Parameter key=value (repeatable); snr_db is the reference SNR")
      ->take_all();

  auto* val = app.add_subcommand("validate", "Check every invariant of a scenario");
  auto* vscen = val->add_option("--scenario", scenario, "Built-in scenario name or scenario file");
  auto* vcfg = val->add_option("--config", config, "Scenario file (JSON)");
  vscen->excludes(vcfg);
  val->add_option("--set", sets, "Override key=value (repeatable)")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*list) {
      for (const irsoc::Scenario& s : irsoc::builtin_scenarios()) {
        std::cout << s.name << "\t" << irsoc::to_string(s.axis) << " sweep, " << s.values.size()
                  << " points, " << s.comparators.size() << " comparators\n";
      }
      return 0;
    }

    if (*an) {
      irsoc::Scenario s;
      s.config.path_loss_mode = irsoc::PathLossMode::kEqual;
      apply_sets(s, sets);
      s.config.validate();
      s.geometry.validate();
      std::printf("%.10g\n", irsoc::analytic_value(irsoc::parse_comparator("analytic:" + law).law,
                                                   s.config, s.geometry));
      return 0;
    }

    if (scenario.empty() && config.empty()) {
      return fail(kExitConfig, "one of --scenario or --config is required");
    }
    Loaded l = load(scenario, config);
    apply_sets(l.scenario, sets);

    if (*val) {
      validate_loaded(l);
      std::cout << l.scenario.name << ": ok\n";
      return 0;
    }

    if (seed) l.scenario.config.master_seed = *seed;
    if (trials) l.scenario.config.n_trials = *trials;
    validate_loaded(l);
    const auto start = std::chrono::steady_clock::now();
    const irsoc::ResultTable table = irsoc::run_scenario(l.scenario, {threads});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    irsoc::write_outputs(l.scenario, table, out_dir, wall);
    std::cout << (std::filesystem::path(out_dir) / (l.scenario.name + ".csv")).string() << '\n';
    return 0;
  } catch (const irsoc::ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const std::exception& e) {
    return fail(kExitRuntime, e.what());
  }
}
