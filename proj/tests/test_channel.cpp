// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "irsoc/channel.hpp"
#include "irsoc/core.hpp"

using namespace irsoc;

namespace {

// Pearson chi-square against a uniform histogram; 1% critical value for 19 dof.
bool uniform_chi_square(const std::vector<double>& xs, double lo, double hi) {
  constexpr int bins = 20;
  constexpr double crit_19dof = 36.191;
  std::vector<double> counts(bins, 0.0);
  for (double x : xs) {
    int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1.0;
  }
  const double expect = static_cast<double>(xs.size()) / bins;
  double chi = 0.0;
  for (double c : counts) chi += (c - expect) * (c - expect) / expect;
  return chi < crit_19dof;
}

CVec direct_dft(const CVec& x, int m) {
  CVec out(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    cd acc{0.0, 0.0};
    for (std::size_t l = 0; l < x.size(); ++l) {
      acc += x[l] * std::polar(1.0, -2.0 * kPi * k * static_cast<double>(l) / m);
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("narrowband entries are circular unit-variance Gaussian") {
  constexpr int draws = 100000;
  double p = 0.0, rr = 0.0, ii = 0.0, ri = 0.0;
  for (int i = 0; i < draws; ++i) {
    RngStream r(3, static_cast<std::uint64_t>(i), 0, Purpose::kChannel);
    const NarrowbandChannelSet ch = gen_narrowband(1, 1, r);
    REQUIRE(ch.n_elements() == 1);
    REQUIRE(ch.n_users() == 1);
    p += std::norm(ch.hd[0]);
    const cd z = ch.h1[0];
    rr += z.real() * z.real();
    ii += z.imag() * z.imag();
    ri += z.real() * z.imag();
  }
  CHECK(p / draws == doctest::Approx(1.0).epsilon(0.02));
  CHECK(rr / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(ii / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(ri / draws) < 0.01);

  RngStream a(8), b(8);
  const auto ca = gen_narrowband(4, 3, a);
  const auto cb = gen_narrowband(4, 3, b);
  CHECK(ca.h2(2, 3) == cb.h2(2, 3));
  CHECK(ca.hd[1] == cb.hd[1]);
}

TEST_CASE("Gauss-Markov evolution") {
  RngStream r(4);
  const CVec h0{{0.3, -1.2}, {2.0, 0.5}};
  CHECK(evolve_gauss_markov(h0, 1.0, r) == h0);

  CVec h{{1.0, 0.0}};
  double acc = 0.0;
  constexpr int slots = 10000;
  RngStream s(5);
  for (int t = 0; t < slots; ++t) {
    evolve_gauss_markov(std::span<cd>(h), 0.9, s);
    acc += std::norm(h[0]);
  }
  // Stationary variance of the AR(1) recursion: alpha^2 v + (1 - alpha^2) = v gives v = 1.
  CHECK(acc / slots == doctest::Approx(1.0).epsilon(0.03));

  // alpha = 0 discards the past.
  RngStream u1(6), u2(6);
  const CVec fresh = evolve_gauss_markov(h0, 0.0, u1);
  CHECK(fresh[0] == u2.complex_normal());
  CHECK_THROWS_AS(evolve_gauss_markov(h0, 1.1, r), std::invalid_argument);
}

TEST_CASE("steering vectors and directions") {
  for (const cd& z : steering_vector(16, 0.7, 0.5)) CHECK(std::abs(z) == doctest::Approx(1.0));
  constexpr double deg = kPi / 180.0;
  RngStream r(7);
  const SteeringChannelSet ch = gen_steering(100000, 20 * deg, -40 * deg, 40 * deg, 0.5, r);
  for (double t : ch.theta_d) {
    REQUIRE(t >= -40 * deg);
    REQUIRE(t <= 40 * deg);
  }
  CHECK(uniform_chi_square(ch.theta_d, -40 * deg, 40 * deg));

  RngStream f(7);
  const SteeringChannelSet fixed = gen_steering(5, 20 * deg, 10 * deg, 10 * deg, 0.5, f);
  for (int k = 0; k < 5; ++k) CHECK(fixed.phase_slope(k) == fixed.phase_slope(0));
  CHECK(fixed.phase_slope(0) ==
        doctest::Approx(kPi * (std::sin(20 * deg) + std::sin(10 * deg))).epsilon(1e-14));

  RngStream e(1);
  CHECK_THROWS_AS(gen_steering(2, 0.0, 0.5, 0.1, 0.5, e), std::invalid_argument);
  CHECK_THROWS_AS(gen_steering(2, 0.0, -kPi / 2, 0.1, 0.5, e), std::invalid_argument);
}

TEST_CASE("power delay profile") {
  const PowerDelayProfile one(1, 1.0);
  CHECK(one[0] == 1.0);

  const PowerDelayProfile p(5, 1.0);
  double raw[5], sum = 0.0;
  for (int l = 0; l < 5; ++l) sum += raw[l] = std::exp(-0.2 * (l + 1));
  double total = 0.0;
  for (int l = 0; l < 5; ++l) {
    CHECK(p[l] == doctest::Approx(raw[l] / sum).epsilon(1e-14));
    total += p[l];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.norm(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PowerDelayProfile(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PowerDelayProfile(3, 0.0), std::invalid_argument);
}

TEST_CASE("wideband taps follow the profile") {
  constexpr int draws = 100000;
  const int l = 5;
  std::vector<double> var(l, 0.0);
  for (int i = 0; i < draws; ++i) {
    RngStream r(9, static_cast<std::uint64_t>(i), 0, Purpose::kChannel);
    const WidebandChannelSet ch = gen_wideband(2, 1, l, 1.0, r);
    for (int t = 0; t < l; ++t) var[static_cast<std::size_t>(t)] += std::norm(ch.h2[0](1, t));
  }
  const PowerDelayProfile p(l, 1.0);
  for (int t = 0; t < l; ++t) CHECK(var[static_cast<std::size_t>(t)] / draws == doctest::Approx(p[t]).epsilon(0.03));

  RngStream r(10);
  const WidebandChannelSet ch = gen_wideband(4, 3, 1, 1.0, r, 0.3, 0.5);
  CHECK(ch.n_taps() == 1);
  CHECK(ch.pdp[0] == 1.0);
  for (const cd& z : ch.h1) CHECK(std::abs(z) == doctest::Approx(1.0));
}

TEST_CASE("frequency-domain transform") {
  RngStream r(12);
  CVec taps(7);
  for (auto& z : taps) z = r.complex_normal();
  for (int m : {7, 16, 64, 100}) {
    const CVec fast = to_frequency_domain(taps, m);
    const CVec slow = direct_dft(taps, m);
    double err = 0.0, energy_f = 0.0, energy_t = 0.0;
    for (int k = 0; k < m; ++k) {
      err = std::max(err, std::abs(fast[static_cast<std::size_t>(k)] - slow[static_cast<std::size_t>(k)]));
      energy_f += std::norm(fast[static_cast<std::size_t>(k)]);
    }
    for (const cd& z : taps) energy_t += std::norm(z);
    CHECK(err < 1e-10);
    CHECK(energy_f == doctest::Approx(m * energy_t).epsilon(1e-10));
  }

  const cd c{0.6, -1.3};
  for (const cd& z : to_frequency_domain(CVec{c}, 32)) {
    CHECK(z.real() == doctest::Approx(c.real()).epsilon(1e-14));
    CHECK(z.imag() == doctest::Approx(c.imag()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(to_frequency_domain(taps, 6), std::invalid_argument);
}
