// SPDX-License-Identifier: Apache-2.0
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "irsoc/analytic.hpp"
#include "irsoc/channel.hpp"
#include "irsoc/core.hpp"
#include "irsoc/experiment.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

template <class E, class Parse>
auto enum_property(E irsoc::SystemConfig::*field, Parse parse) {
  return std::make_pair(
      [field](const irsoc::SystemConfig& c) { return std::string(irsoc::to_string(c.*field)); },
      [field, parse](irsoc::SystemConfig& c, const std::string& s) { c.*field = parse(s); });
}

py::array_t<double> to_array(std::vector<double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::string str_value(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>() ? "true" : "false";
  return py::str(h).cast<std::string>();
}

void apply_dict(irsoc::SystemConfig& cfg, irsoc::Geometry& geo, const py::dict& settings) {
  for (auto [k, v] : settings) {
    irsoc::apply_setting(cfg, geo, py::str(k).cast<std::string>(), str_value(v));
  }
}

irsoc::analytic::ScalingLawInput law_input(double snr_db, int n, double k, int q, double zeta,
                                           int m, int taps, double nu) {
  irsoc::analytic::ScalingLawInput in;
  in.snr_ref = irsoc::db_to_linear(snr_db);
  in.n = n;
  in.k = k;
  in.q = q;
  in.zeta = zeta;
  in.m = m;
  if (taps > 0) in.pdp = irsoc::PowerDelayProfile(taps, nu);
  return in;
}

}  // namespace

PYBIND11_MODULE(_irsoc, m) {
  m.doc() = "IRS-assisted opportunistic scheduling: Monte Carlo simulator and closed-form laws";
  m.attr("__version__") = std::string(irsoc::library_version());

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> config_error;
  config_error.call_once_and_store_result([&]() {
    return py::object(py::reinterpret_steal<py::object>(
        PyErr_NewException("irs_opsim._irsoc.ConfigError", PyExc_ValueError, nullptr)));
  });
  m.attr("ConfigError") = config_error.get_stored();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const irsoc::ConfigError& e) {
      py::object type = config_error.get_stored();
      py::object inst = type(e.what());
      inst.attr("key") = e.key();
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::class_<irsoc::Point>(m, "Point")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return irsoc::Point{x, y}; }), "x"_a, "y"_a)
      .def_readwrite("x", &irsoc::Point::x)
      .def_readwrite("y", &irsoc::Point::y)
      .def("__repr__", [](const irsoc::Point& p) {
        return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
      });

  py::class_<irsoc::Geometry>(m, "Geometry")
      .def(py::init<>())
      .def_readwrite("bs_position", &irsoc::Geometry::bs_position)
      .def_readwrite("irs_position", &irsoc::Geometry::irs_position)
      .def_property(
          "user_region",
          [](const irsoc::Geometry& g) { return py::make_tuple(g.user_region.lo, g.user_region.hi); },
          [](irsoc::Geometry& g, std::pair<irsoc::Point, irsoc::Point> r) {
            g.user_region = {r.first, r.second};
          })
      .def_property(
          "exponents",
          [](const irsoc::Geometry& g) {
            return py::make_tuple(g.exponents.bs_irs, g.exponents.irs_user, g.exponents.bs_user);
          },
          [](irsoc::Geometry& g, std::tuple<double, double, double> e) {
            g.exponents = {std::get<0>(e), std::get<1>(e), std::get<2>(e)};
          })
      .def("validate", &irsoc::Geometry::validate);

  auto scheme = enum_property(&irsoc::SystemConfig::scheme, irsoc::parse_scheme);
  auto scheduler = enum_property(&irsoc::SystemConfig::scheduler, irsoc::parse_scheduler);
  auto channel = enum_property(&irsoc::SystemConfig::channel_model, irsoc::parse_channel_model);
  auto pl_mode = enum_property(&irsoc::SystemConfig::path_loss_mode, irsoc::parse_path_loss_mode);

  py::class_<irsoc::SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("n_irs_elements", &irsoc::SystemConfig::n_irs_elements)
      .def_readwrite("n_users", &irsoc::SystemConfig::n_users)
      .def_readwrite("tx_power_dbm", &irsoc::SystemConfig::tx_power_dbm)
      .def_readwrite("noise_dbm", &irsoc::SystemConfig::noise_dbm)
      .def_readwrite("pf_window_tau", &irsoc::SystemConfig::pf_window_tau)
      .def_readwrite("pilot_fraction_zeta", &irsoc::SystemConfig::pilot_fraction_zeta)
      .def_readwrite("n_slots", &irsoc::SystemConfig::n_slots)
      .def_readwrite("n_trials", &irsoc::SystemConfig::n_trials)
      .def_readwrite("master_seed", &irsoc::SystemConfig::master_seed)
      .def_readwrite("element_spacing_over_lambda",
                     &irsoc::SystemConfig::element_spacing_over_lambda)
      .def_readwrite("equal_snr_db", &irsoc::SystemConfig::equal_snr_db)
      .def_readwrite("n_pilots", &irsoc::SystemConfig::n_pilots)
      .def_readwrite("gauss_markov_alpha", &irsoc::SystemConfig::gauss_markov_alpha)
      .def_readwrite("n_taps", &irsoc::SystemConfig::n_taps)
      .def_readwrite("pdp_decay_nu", &irsoc::SystemConfig::pdp_decay_nu)
      .def_readwrite("n_subcarriers", &irsoc::SystemConfig::n_subcarriers)
      .def_readwrite("doa_deg", &irsoc::SystemConfig::doa_deg)
      .def_readwrite("dod_min_deg", &irsoc::SystemConfig::dod_min_deg)
      .def_readwrite("dod_max_deg", &irsoc::SystemConfig::dod_max_deg)
      .def_readwrite("pf_initial_throughput", &irsoc::SystemConfig::pf_initial_throughput)
      .def_property("scheme", scheme.first, scheme.second)
      .def_property("scheduler", scheduler.first, scheduler.second)
      .def_property("channel_model", channel.first, channel.second)
      .def_property("path_loss_mode", pl_mode.first, pl_mode.second)
      .def("validate", &irsoc::SystemConfig::validate);

  m.def(
      "make_config",
      [](const py::dict& settings) {
        irsoc::SystemConfig cfg;
        irsoc::Geometry geo;
        apply_dict(cfg, geo, settings);
        cfg.validate();
        geo.validate();
        return py::make_tuple(cfg, geo);
      },
      "settings"_a = py::dict(),
      "Configuration and geometry from scenario-file keys (aliases such as K, N, Q accepted).");
  m.def(
      "apply_setting",
      [](irsoc::SystemConfig& cfg, irsoc::Geometry& geo, const std::string& key,
         const py::handle& value) { irsoc::apply_setting(cfg, geo, key, str_value(value)); },
      "config"_a, "geometry"_a, "key"_a, "value"_a);
  m.def("canonical_key", &irsoc::canonical_key, "key"_a);

  // Link budget
  m.def("db_to_linear", &irsoc::db_to_linear, "x_db"_a);
  m.def("linear_to_db", &irsoc::linear_to_db, "x"_a);
  m.def("thermal_noise_dbm", &irsoc::thermal_noise_dbm, "temperature_k"_a, "bandwidth_hz"_a);
  m.def("path_loss", &irsoc::path_loss, "distance_m"_a, "exponent"_a);
  m.def("mean_direct_gain", &irsoc::mean_direct_gain, "geometry"_a, "grid"_a = 200);
  m.def(
      "link_budget",
      [](const irsoc::Geometry& g, const std::vector<irsoc::Point>& users, double p_dbm,
         double noise_dbm) {
        auto lb = irsoc::link_budget(g, users, p_dbm, noise_dbm);
        py::dict d;
        d["beta_r"] = to_array(lb.beta_r);
        d["beta_d"] = to_array(lb.beta_d);
        d["snr_ref"] = to_array(lb.snr_ref);
        d["p_over_sigma2"] = lb.p_over_sigma2;
        return d;
      },
      "geometry"_a, "users"_a, "tx_power_dbm"_a, "noise_dbm"_a);
  m.def("reference_snr", &irsoc::reference_snr, "config"_a, "geometry"_a);
  m.def("auto_pilots", &irsoc::auto_pilots, "config"_a, "geometry"_a);

  // Closed-form laws
  namespace an = irsoc::analytic;
  py::class_<an::OptimalQ>(m, "OptimalQ")
      .def_readonly("q_hat", &an::OptimalQ::q_hat)
      .def_readonly("q_rounded", &an::OptimalQ::q_rounded)
      .def_readonly("q_star", &an::OptimalQ::q_star)
      .def_readonly("sweep_fallback", &an::OptimalQ::sweep_fallback)
      .def_readonly("q_stationary", &an::OptimalQ::q_stationary)
      .def_readonly("q_sweep", &an::OptimalQ::q_sweep)
      .def_readonly("q_max", &an::OptimalQ::q_max)
      .def_readonly("iterations", &an::OptimalQ::iterations);

  m.def("lambert_w0", &an::lambert_w0, "x"_a);
  m.def(
      "rate_theorem1",
      [](double snr_db, int n, double k, int q, double zeta) {
        return an::rate_theorem1(law_input(snr_db, n, k, q, zeta, 1, 0, 0.0));
      },
      "snr_db"_a, "n"_a, "k"_a, "q"_a = 1, "zeta"_a = 0.0,
      "Uniform-random / Q-pilot rate with i.i.d. Rayleigh fading.");
  m.def(
      "rate_theorem2",
      [](double snr_db, int n, double k) { return an::rate_theorem2(irsoc::db_to_linear(snr_db), n, k); },
      "snr_db"_a, "n"_a, "k"_a);
  m.def(
      "rate_theorem3",
      [](double snr_db, int n, double k, int taps, double nu) {
        auto r = an::rate_theorem3(law_input(snr_db, n, k, 1, 0.0, 1, taps, nu));
        return py::make_tuple(r.exact_quantile, r.approximation);
      },
      "snr_db"_a, "n"_a, "k"_a, "taps"_a, "nu"_a = 1.0,
      "SU-OFDM per-subcarrier rate: (exact-quantile form, approximation).");
  m.def(
      "rate_theorem4",
      [](double snr_db, int n, double k, int m_sub) {
        return an::rate_theorem4(law_input(snr_db, n, k, 1, 0.0, m_sub, 0, 0.0));
      },
      "snr_db"_a, "n"_a, "k"_a, "m"_a,
      "OFDMA sum rate over m subcarriers; snr_db is the total reference SNR before the 1/m split.");
  m.def("optimal_q", &an::optimal_q, "k"_a, "n"_a, "zeta"_a, "beta"_a);
  m.def("max_pilots", &an::max_pilots, "zeta"_a);
  m.def("normal_cdf", &an::normal_cdf, "x"_a);
  m.def("normal_quantile", &an::normal_quantile, "p"_a);
  m.def("gumbel_cdf", &an::gumbel_cdf, "x"_a, "scale"_a);
  m.def("evt_location_exponential", &an::evt_location_exponential, "mean"_a, "count"_a);
  m.def(
      "hypoexp_cdf",
      [](std::vector<double> means, double y) { return an::HypoExpDist(std::move(means)).cdf(y); },
      "means"_a, "y"_a);
  m.def(
      "hypoexp_quantile",
      [](std::vector<double> means, double p) { return an::HypoExpDist(std::move(means)).quantile(p); },
      "means"_a, "p"_a);
  m.def(
      "excess_kurtosis",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x) {
        return an::excess_kurtosis(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
      },
      "samples"_a);
  m.def(
      "excess_kurtosis_analytic",
      [](int taps, double nu, int n) { return an::excess_kurtosis_analytic(irsoc::PowerDelayProfile(taps, nu), n); },
      "taps"_a, "nu"_a = 1.0, "n"_a = 0);
  m.def(
      "pdp_taps",
      [](int taps, double nu) {
        irsoc::PowerDelayProfile p(taps, nu);
        return to_array({p.taps().begin(), p.taps().end()});
      },
      "taps"_a, "nu"_a = 1.0);
  m.def(
      "analytic_value",
      [](const std::string& law, const irsoc::SystemConfig& c, const irsoc::Geometry& g) {
        return irsoc::analytic_value(law, c, g);
      },
      "law"_a, "config"_a, "geometry"_a);

  // Simulation
  m.def(
      "simulate_trials",
      [](const irsoc::SystemConfig& cfg, const irsoc::Geometry& geo, bool fair_share, int threads) {
        std::vector<double> out;
        {
          py::gil_scoped_release release;
          out = irsoc::simulate_trials(cfg, geo, fair_share, irsoc::RunOptions{threads});
        }
        return to_array(std::move(out));
      },
      "config"_a, "geometry"_a, "fair_share"_a = false, "threads"_a = 1,
      "Per-trial time-averaged served rate, ordered by trial index.");
  m.def(
      "tap_energy_samples",
      [](const irsoc::SystemConfig& cfg, std::uint64_t batch, std::size_t count) {
        return to_array(irsoc::tap_energy_samples(cfg, batch, count));
      },
      "config"_a, "batch"_a, "count"_a);

  py::class_<irsoc::ResultRow>(m, "ResultRow")
      .def_readonly("sweep", &irsoc::ResultRow::sweep)
      .def_readonly("comparator", &irsoc::ResultRow::comparator)
      .def_readonly("mean_rate", &irsoc::ResultRow::mean_rate)
      .def_readonly("stderr", &irsoc::ResultRow::stderr_rate)
      .def_readonly("n_trials", &irsoc::ResultRow::n_trials)
      .def_readonly("seed", &irsoc::ResultRow::seed);

  py::class_<irsoc::ResultTable>(m, "ResultTable")
      .def_readonly("rows", &irsoc::ResultTable::rows)
      .def("to_csv", &irsoc::ResultTable::to_csv)
      .def("series", [](const irsoc::ResultTable& t, const std::string& c) { return t.series(c); },
           "comparator"_a)
      .def("__len__", [](const irsoc::ResultTable& t) { return t.rows.size(); })
      .def_property_readonly_static(
          "csv_header", [](py::object) { return std::string(irsoc::ResultTable::kCsvHeader); });

  py::class_<irsoc::Scenario>(m, "Scenario")
      .def_readwrite("name", &irsoc::Scenario::name)
      .def_readwrite("config", &irsoc::Scenario::config)
      .def_readwrite("geometry", &irsoc::Scenario::geometry)
      .def_readwrite("values", &irsoc::Scenario::values)
      .def_property_readonly("sweep_axis",
                             [](const irsoc::Scenario& s) { return std::string(irsoc::to_string(s.axis)); })
      .def_property_readonly("comparators",
                             [](const irsoc::Scenario& s) {
                               std::vector<std::string> out;
                               for (const auto& c : s.comparators) out.push_back(c.label);
                               return out;
                             })
      .def("set",
           [](irsoc::Scenario& s, const std::string& key, const py::handle& value) {
             irsoc::apply_setting(s.config, s.geometry, key, str_value(value));
           },
           "key"_a, "value"_a)
      .def("validate", &irsoc::Scenario::validate)
      .def("to_json", [](const irsoc::Scenario& s) { return irsoc::scenario_to_json(s); });

  m.def("builtin_scenario_names", []() {
    std::vector<std::string> out;
    for (const auto& s : irsoc::builtin_scenarios()) out.push_back(s.name);
    return out;
  });
  m.def("builtin_scenario", [](const std::string& name) { return irsoc::builtin_scenario(name); },
        "name"_a);
  m.def("scenario_from_json",
        [](const std::string& text, const std::string& source) {
          return irsoc::scenario_from_json(text, source);
        },
        "text"_a, "source"_a = "<string>");
  m.def("load_scenario_file", &irsoc::load_scenario_file, "path"_a);
  m.def(
      "run_scenario",
      [](const irsoc::Scenario& s, int threads) {
        py::gil_scoped_release release;
        return irsoc::run_scenario(s, irsoc::RunOptions{threads});
      },
      "scenario"_a, "threads"_a = 1);
  m.def("write_outputs", &irsoc::write_outputs, "scenario"_a, "table"_a, "out_dir"_a,
        "wall_time_s"_a = 0.0);
}
