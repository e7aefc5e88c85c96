// SPDX-License-Identifier: Apache-2.0
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irsoc/experiment.hpp"
#include "json.hpp"

namespace irsoc {
namespace {

using json = nlohmann::ordered_json;

struct Alias {
  std::string_view alias;
  std::string_view key;
};

constexpr Alias kAliases[] = {
    {"N", "n_irs_elements"},    {"K", "n_users"},          {"Q", "n_pilots"},
    {"M", "n_subcarriers"},     {"L", "n_taps"},           {"tau", "pf_window_tau"},
    {"zeta", "pilot_fraction_zeta"}, {"alpha", "gauss_markov_alpha"}, {"nu", "pdp_decay_nu"},
    {"snr_db", "equal_snr_db"}, {"seed", "master_seed"},   {"path_loss", "path_loss_mode"},
    {"trials", "n_trials"},     {"slots", "n_slots"},
};

double to_double(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError(std::string(key), "expected a number, got '" + s + "'");
  }
  return x;
}

long long to_integer(std::string_view key, std::string_view value) {
  const double x = to_double(key, value);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
  }
  return static_cast<long long>(x);
}

int to_int(std::string_view key, std::string_view value) {
  const long long x = to_integer(key, value);
  if (x < -2147483647LL || x > 2147483647LL) {
    throw ConfigError(std::string(key), "value out of range");
  }
  return static_cast<int>(x);
}

template <typename F>
auto parse_enum(std::string_view key, std::string_view value, F&& parse) {
  try {
    return parse(value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key), e.what());
  }
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_null()) return "none";
  throw ConfigError("", "expected a scalar value");
}

int line_at_offset(std::string_view text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

[[noreturn]] void rethrow_with_line(const ConfigError& e, std::string_view text,
                                    std::string_view source) {
  const int line = source_line_for_key(text, e.key());
  std::string msg(source);
  if (line > 0) msg += ":" + std::to_string(line);
  msg += ": " + (e.key().empty() ? std::string() : e.key() + ": ") + e.what();
  throw ConfigError(e.key(), msg);
}

std::string format_value(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

Scenario make_base(std::string name) {
  Scenario s;
  s.name = std::move(name);
  return s;
}

void add(Scenario& s, std::initializer_list<const char*> comps) {
  for (const char* c : comps) s.comparators.push_back(parse_comparator(c));
}

std::vector<std::string> assumptions_for(const Scenario& s) {
  std::vector<std::string> out = {
      "element spacing d/lambda = " + format_value(s.config.element_spacing_over_lambda),
      "PF initial throughput T_k(0) = " + format_value(s.config.pf_initial_throughput),
      "argmax ties resolved to the lowest index",
      "big-O constants of the order-of-growth laws set to 1",
      "analytic laws use one common beta for all users and links",
  };
  if (s.config.equal_snr_db) {
    out.push_back("equal path-loss reference SNR = " + format_value(*s.config.equal_snr_db) +
                  " dB (per subcarrier for wideband schemes)");
  } else {
    out.push_back(
        "equal path-loss beta = mean direct-link gain over the user region (200x200 midpoint grid)");
  }
  out.push_back("wideband taps occupy lags 0..L-1; PDP a_l evaluated with l = 1..L");
  out.push_back("wideband analytic overlays: SU-OFDM bound = M * log2(1 + snr_sc (N+1)[1 + ||a||_2 x]), "
                "OFDMA law with snr_ref = M * snr_sc");
  out.push_back("Q=auto resolves to the rounded fixed-point optimum of the pilot-overhead rate law, "
                "or the exhaustive integer argmax when that is strictly better");
  return out;
}

}  // namespace

std::string canonical_key(std::string_view key) {
  for (const Alias& a : kAliases) {
    if (a.alias == key) return std::string(a.key);
  }
  return std::string(key);
}

int source_line_for_key(std::string_view text, std::string_view key) {
  if (key.empty()) return 0;
  std::vector<std::string_view> names = {key};
  const std::string canon = canonical_key(key);
  if (canon != key) names.push_back(canon);
  for (const Alias& a : kAliases) {
    if (a.key == canon) names.push_back(a.alias);
  }
  std::size_t best = std::string_view::npos;
  for (std::string_view n : names) {
    const std::string quoted = "\"" + std::string(n) + "\"";
    const std::size_t pos = text.find(quoted);
    if (pos != std::string_view::npos && pos < best) best = pos;
  }
  return best == std::string_view::npos ? 0 : line_at_offset(text, best);
}

void apply_setting(SystemConfig& cfg, Geometry& geometry, std::string_view raw_key,
                   std::string_view value) {
  const std::string key = canonical_key(raw_key);
  const auto num = [&] { return to_double(key, value); };
  const auto integer = [&] { return to_int(key, value); };
  if (key == "n_irs_elements") cfg.n_irs_elements = integer();
  else if (key == "n_users") cfg.n_users = integer();
  else if (key == "tx_power_dbm") cfg.tx_power_dbm = num();
  else if (key == "tx_power_mw") {
    const double mw = num();
    if (!(mw > 0)) throw ConfigError(key, "transmit power must be > 0");
    cfg.tx_power_dbm = linear_to_db(mw);
  } else if (key == "noise_dbm") cfg.noise_dbm = num();
  else if (key == "pf_window_tau") cfg.pf_window_tau = num();
  else if (key == "pilot_fraction_zeta") cfg.pilot_fraction_zeta = num();
  else if (key == "scheme") cfg.scheme = parse_enum(key, value, parse_scheme);
  else if (key == "scheduler") cfg.scheduler = parse_enum(key, value, parse_scheduler);
  else if (key == "n_slots") cfg.n_slots = integer();
  else if (key == "n_trials") cfg.n_trials = integer();
  else if (key == "master_seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError(key, "seed must be >= 0");
    cfg.master_seed = static_cast<std::uint64_t>(s);
  } else if (key == "element_spacing_over_lambda") cfg.element_spacing_over_lambda = num();
  else if (key == "channel_model") cfg.channel_model = parse_enum(key, value, parse_channel_model);
  else if (key == "path_loss_mode") cfg.path_loss_mode = parse_enum(key, value, parse_path_loss_mode);
  else if (key == "equal_snr_db") {
    if (value == "none" || value.empty()) {
      cfg.equal_snr_db.reset();
    } else {
      cfg.equal_snr_db = num();
    }
  } else if (key == "n_pilots") cfg.n_pilots = integer();
  else if (key == "gauss_markov_alpha") cfg.gauss_markov_alpha = num();
  else if (key == "n_taps") cfg.n_taps = integer();
  else if (key == "pdp_decay_nu") cfg.pdp_decay_nu = num();
  else if (key == "n_subcarriers") cfg.n_subcarriers = integer();
  else if (key == "doa_deg") cfg.doa_deg = num();
  else if (key == "dod_min_deg") cfg.dod_min_deg = num();
  else if (key == "dod_max_deg") cfg.dod_max_deg = num();
  else if (key == "pf_initial_throughput") cfg.pf_initial_throughput = num();
  else if (key == "bs_x") geometry.bs_position.x = num();
  else if (key == "bs_y") geometry.bs_position.y = num();
  else if (key == "irs_x") geometry.irs_position.x = num();
  else if (key == "irs_y") geometry.irs_position.y = num();
  else if (key == "region_x0") geometry.user_region.lo.x = num();
  else if (key == "region_y0") geometry.user_region.lo.y = num();
  else if (key == "region_x1") geometry.user_region.hi.x = num();
  else if (key == "region_y1") geometry.user_region.hi.y = num();
  else if (key == "ple_bs_irs") geometry.exponents.bs_irs = num();
  else if (key == "ple_irs_user") geometry.exponents.irs_user = num();
  else if (key == "ple_bs_user") geometry.exponents.bs_user = num();
  else throw ConfigError(std::string(raw_key), "unknown configuration key '" + std::string(raw_key) + "'");
}

Scenario scenario_from_json(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string(source) + ":" +
                              std::to_string(line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                              ": malformed scenario file: " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("", std::string(source) + ":1: scenario file must be a JSON object");
  }
  Scenario s;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "name") {
        if (!value.is_string()) throw ConfigError(key, "must be a string");
        s.name = value.get<std::string>();
      } else if (key == "sweep_axis") {
        if (!value.is_string()) throw ConfigError(key, "must be a string");
        s.axis = parse_sweep_axis(value.get<std::string>());
      } else if (key == "sweep_values") {
        if (!value.is_array()) throw ConfigError(key, "must be an array of numbers");
        s.values.clear();
        for (const auto& v : value) {
          if (!v.is_number()) throw ConfigError(key, "must be an array of numbers");
          s.values.push_back(v.get<double>());
        }
      } else if (key == "comparators") {
        if (!value.is_array()) throw ConfigError(key, "must be an array of strings");
        s.comparators.clear();
        for (const auto& v : value) {
          if (!v.is_string()) throw ConfigError(key, "must be an array of strings");
          s.comparators.push_back(parse_comparator(v.get<std::string>()));
        }
      } else {
        if (value.is_object() || value.is_array()) {
          throw ConfigError(key, "scenario keys take scalar values");
        }
        try {
          apply_setting(s.config, s.geometry, key, json_scalar(value));
        } catch (const ConfigError& e) {
          if (e.key().empty()) throw ConfigError(key, e.what());
          throw;
        }
      }
    }
  } catch (const ConfigError& e) {
    rethrow_with_line(e, text, source);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str(), path);
}

std::string scenario_to_json(const Scenario& s) {
  const SystemConfig& c = s.config;
  const Geometry& g = s.geometry;
  json j;
  j["name"] = s.name;
  j["sweep_axis"] = std::string(to_string(s.axis));
  j["sweep_values"] = s.values;
  json comps = json::array();
  for (const Comparator& cmp : s.comparators) comps.push_back(cmp.label);
  j["comparators"] = comps;
  j["n_irs_elements"] = c.n_irs_elements;
  j["n_users"] = c.n_users;
  j["tx_power_dbm"] = c.tx_power_dbm;
  j["noise_dbm"] = c.noise_dbm;
  j["pf_window_tau"] = c.pf_window_tau;
  j["pilot_fraction_zeta"] = c.pilot_fraction_zeta;
  j["scheme"] = std::string(to_string(c.scheme));
  j["scheduler"] = std::string(to_string(c.scheduler));
  j["n_slots"] = c.n_slots;
  j["n_trials"] = c.n_trials;
  j["master_seed"] = c.master_seed;
  j["element_spacing_over_lambda"] = c.element_spacing_over_lambda;
  j["channel_model"] = std::string(to_string(c.channel_model));
  j["path_loss_mode"] = std::string(to_string(c.path_loss_mode));
  j["equal_snr_db"] = c.equal_snr_db ? json(*c.equal_snr_db) : json(nullptr);
  j["n_pilots"] = c.n_pilots;
  j["gauss_markov_alpha"] = c.gauss_markov_alpha;
  j["n_taps"] = c.n_taps;
  j["pdp_decay_nu"] = c.pdp_decay_nu;
  j["n_subcarriers"] = c.n_subcarriers;
  j["doa_deg"] = c.doa_deg;
  j["dod_min_deg"] = c.dod_min_deg;
  j["dod_max_deg"] = c.dod_max_deg;
  j["pf_initial_throughput"] = c.pf_initial_throughput;
  j["bs_x"] = g.bs_position.x;
  j["bs_y"] = g.bs_position.y;
  j["irs_x"] = g.irs_position.x;
  j["irs_y"] = g.irs_position.y;
  j["region_x0"] = g.user_region.lo.x;
  j["region_y0"] = g.user_region.lo.y;
  j["region_x1"] = g.user_region.hi.x;
  j["region_y1"] = g.user_region.hi.y;
  j["ple_bs_irs"] = g.exponents.bs_irs;
  j["ple_irs_user"] = g.exponents.irs_user;
  j["ple_bs_user"] = g.exponents.bs_user;
  return j.dump(2);
}

void write_outputs(const Scenario& s, const ResultTable& table, const std::string& out_dir,
                   double wall_time_s) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(out_dir + ": cannot create output directory: " + ec.message());
  const fs::path csv = dir / (s.name + ".csv");
  const fs::path manifest = dir / (s.name + ".manifest.json");
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error(csv.string() + ": cannot write");
    out << table.to_csv();
    if (!out) throw std::runtime_error(csv.string() + ": write failed");
  }
  json m;
  m["name"] = s.name;
  m["software"] = "irs-opsim";
  m["version"] = std::string(library_version());
  m["wall_time_s"] = wall_time_s;
  m["csv"] = csv.filename().string();
  m["columns"] = {"sweep", "comparator", "mean_rate", "stderr", "n_trials", "seed"};
  m["assumptions"] = assumptions_for(s);
  m["scenario"] = json::parse(scenario_to_json(s));
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw std::runtime_error(manifest.string() + ": cannot write");
  out << m.dump(2) << '\n';
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> all;

  // PF scheduling over a time-correlated single-antenna channel.
  Scenario fig1 = make_base("fig1");
  fig1.config.scheme = Scheme::kNoIrs;
  fig1.config.n_irs_elements = 1;
  fig1.config.channel_model = ChannelModel::kGaussMarkov;
  fig1.config.n_slots = 20000;
  fig1.config.n_trials = 20;
  fig1.values = {1, 2, 4, 8, 16, 32, 64};
  add(fig1, {"sim:no_irs@tau=10", "sim:no_irs@tau=100", "sim:no_irs@tau=5000",
             "sim:no_irs@alpha=0.5", "sim:no_irs@alpha=0.99"});
  all.push_back(fig1);

  Scenario fig2 = make_base("fig2");
  fig2.values = {8, 16, 32, 64, 128, 256, 512};
  add(fig2, {"sim:uniform_random@N=4", "bf_fair_share@N=4", "sim:no_irs@N=4",
             "sim:uniform_random@N=8", "bf_fair_share@N=8", "sim:no_irs@N=8",
             "sim:uniform_random@N=16", "bf_fair_share@N=16", "sim:no_irs@N=16"});
  all.push_back(fig2);

  Scenario fig3 = make_base("fig3");
  fig3.config.scheme = Scheme::kQPilot;
  fig3.config.scheduler = SchedulerKind::kMaxRate;
  fig3.config.path_loss_mode = PathLossMode::kEqual;
  fig3.axis = SweepAxis::kPilots;
  fig3.values = {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20, 30, 40, 50, 60, 70, 80, 90, 99};
  add(fig3, {"sim:qpilot", "analytic:theorem1"});
  all.push_back(fig3);

  Scenario fig4 = make_base("fig4");
  fig4.config.scheme = Scheme::kQPilot;
  fig4.values = {10, 20, 50, 100, 200, 500, 1000};
  add(fig4, {"sim:qpilot@Q=1", "sim:qpilot@Q=auto",
             "sim:qpilot@Q=auto,path_loss_mode=equal,scheduler=max_rate",
             "analytic:theorem1@Q=auto"});
  all.push_back(fig4);

  Scenario fig5 = make_base("fig5");
  fig5.config.channel_model = ChannelModel::kSteering;
  fig5.config.n_irs_elements = 64;
  fig5.values = {10, 20, 50, 100, 200, 500, 1000};
  add(fig5, {"sim:channel_aware", "sim:uniform_random", "bf_fair_share", "analytic:theorem2"});
  all.push_back(fig5);

  Scenario fig6 = make_base("fig6");
  fig6.config.channel_model = ChannelModel::kSteering;
  fig6.axis = SweepAxis::kElements;
  fig6.values = {8, 16, 32, 64, 128, 256, 512, 1024};
  add(fig6, {"sim:channel_aware@K=50", "sim:uniform_random@K=50", "bf_fair_share@K=50",
             "sim:channel_aware@K=500", "sim:uniform_random@K=500", "bf_fair_share@K=500"});
  all.push_back(fig6);

  Scenario fig7 = make_base("fig7");
  fig7.config.scheme = Scheme::kOfdma;
  fig7.config.scheduler = SchedulerKind::kMaxRate;
  fig7.config.path_loss_mode = PathLossMode::kEqual;
  fig7.config.tx_power_dbm = 24.0;
  fig7.config.noise_dbm = -98.95;
  fig7.config.equal_snr_db = 4.3;
  fig7.config.n_taps = 25;
  fig7.config.n_subcarriers = 1024;
  fig7.config.n_trials = 4;
  fig7.config.n_slots = 10;
  fig7.values = {10, 30, 100, 300, 1000};
  add(fig7, {"sim:ofdma@N=8", "sim:su_ofdm@N=8", "analytic:theorem4@N=8", "analytic:theorem3@N=8",
             "sim:ofdma@N=32", "sim:su_ofdm@N=32", "analytic:theorem4@N=32",
             "analytic:theorem3@N=32"});
  all.push_back(fig7);

  Scenario table1 = make_base("table1");
  table1.config.scheme = Scheme::kSuOfdm;
  table1.config.n_irs_elements = 1;
  table1.config.n_users = 1000;
  table1.config.n_trials = 10;
  table1.config.n_slots = 100;
  table1.axis = SweepAxis::kTaps;
  table1.values = {1, 2, 5, 10, 20, 25, 50, 100};
  add(table1, {"kurtosis:empirical", "kurtosis:analytic"});
  all.push_back(table1);

  return all;
}

Scenario builtin_scenario(std::string_view name) {
  for (Scenario& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("scenario", "unknown built-in scenario '" + std::string(name) + "'");
}

}  // namespace irsoc
