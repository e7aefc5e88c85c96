// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "irsoc/sched.hpp"

using namespace irsoc;

TEST_CASE("instantaneous rate") {
  CHECK(instantaneous_rate({0.0, 0.0}, 100.0) == 0.0);
  CHECK(instantaneous_rate({1.0, 0.0}, 1.0) == doctest::Approx(1.0));
  CHECK(instantaneous_rate({std::sqrt(1.5), std::sqrt(1.5)}, 5.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("max-rate selection and ties") {
  CHECK(select_max_rate(std::vector<double>{1, 2, 3}) == 2);
  CHECK(select_max_rate(std::vector<double>{2, 2, 2}) == 0);
  CHECK(select_max_rate(std::vector<double>{0.7}) == 0);
  CHECK_THROWS_AS(select_max_rate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("proportional-fair selection") {
  SchedulerState equal(3, 2.0);
  const std::vector<double> r{0.5, 3.0, 1.0};
  CHECK(select_pf(r, equal) == select_max_rate(r));

  SchedulerState st(2, 1.0);
  st.t_k = {1.0, 4.0};
  CHECK(select_pf(std::vector<double>{2, 2}, st) == 0);

  // User 2 always sees 0.9x the rate of user 1 and is still served.
  SchedulerState s2(2, 1.0);
  int served2 = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::vector<double> rates{1.0, 0.9};
    const int sel = select_pf(rates, s2);
    served2 += sel == 1;
    update_pf_state(s2, sel, rates[static_cast<std::size_t>(sel)], 100.0);
  }
  CHECK(served2 > 0);
  CHECK_THROWS_AS(select_pf(std::vector<double>{1.0}, s2), std::invalid_argument);
}

TEST_CASE("exponential-window update") {
  SchedulerState st(2, 1.0);
  update_pf_state(st, 0, 2.0, 5000.0);
  CHECK(st.t_k[0] == doctest::Approx(1.0002).epsilon(1e-14));
  CHECK(st.t_k[1] == doctest::Approx(0.9998).epsilon(1e-14));
  CHECK(st.slot_index == 1);

  SchedulerState frozen(2, 1.0);
  for (int t = 0; t < 10000; ++t) update_pf_state(frozen, t % 2, 5.0, 1e12);
  CHECK(frozen.t_k[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("round robin") {
  SchedulerState st(3, 1.0);
  std::vector<int> order;
  for (int t = 0; t < 6; ++t) {
    order.push_back(select_round_robin(st));
    ++st.slot_index;
  }
  CHECK(order == std::vector<int>{0, 1, 2, 0, 1, 2});
  SchedulerState one(1, 1.0);
  for (int t = 0; t < 4; ++t, ++one.slot_index) CHECK(select_round_robin(one) == 0);
}

TEST_CASE("round robin collects no multi-user gain") {
  constexpr int k = 8;
  constexpr int slots = 400000;
  constexpr double snr = 10.0;
  SchedulerState st(k, 1.0);
  RngStream r(3);
  double served = 0.0;
  for (int t = 0; t < slots; ++t) {
    std::vector<double> rates(k);
    for (double& x : rates) x = rate_from_gain(r.exponential(), snr);
    served += rates[static_cast<std::size_t>(select_round_robin(st))];
    ++st.slot_index;
  }
  // Ergodic Rayleigh rate E[log2(1 + snr X)] by quadrature over the exponential density.
  double ergodic = 0.0;
  const double dx = 1e-4;
  for (double x = dx / 2; x < 40.0; x += dx) ergodic += std::log2(1.0 + snr * x) * std::exp(-x) * dx;
  CHECK(served / slots == doctest::Approx(ergodic).epsilon(0.02));
}

TEST_CASE("multi-pilot selection") {
  const std::vector<double> one{1.0, 3.0, 2.0};
  const SlotDecision d1 = select_qpilot(one, 1, nullptr, 0.01);
  CHECK(d1.selected_user == 1);
  CHECK(d1.achieved_rate == doctest::Approx(0.99 * 3.0));

  const std::vector<double> two{1.0, 4.0, 2.5, 3.0};
  const SlotDecision d2 = select_qpilot(two, 2, nullptr, 0.01);
  CHECK(d2.selected_user == 0);
  CHECK(d2.selected_pilot == 1);
  CHECK(d2.achieved_rate == doctest::Approx(3.92).epsilon(1e-14));

  std::vector<double> dom(12, 1.0);
  dom[7] = 50.0;
  const SlotDecision d3 = select_qpilot(dom, 3, nullptr, 0.0);
  CHECK(d3.selected_user == 2);
  CHECK(d3.selected_pilot == 1);

  SchedulerState st(2, 1.0);
  st.t_k = {10.0, 1.0};
  CHECK(select_qpilot(two, 2, &st, 0.01).selected_user == 1);

  CHECK_THROWS_AS(select_qpilot(two, 2, nullptr, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(select_qpilot(two, 3, nullptr, 0.01), std::invalid_argument);
}

TEST_CASE("single-user and multi-user OFDM") {
  RngStream r(5);
  CMatrix f(3, 1);
  for (auto& z : f.data()) z = r.complex_normal();
  std::vector<double> nb;
  for (int k = 0; k < 3; ++k) nb.push_back(instantaneous_rate(f(k, 0), 2.0));
  const SlotDecision su1 = select_su_ofdm(f, 2.0);
  CHECK(su1.selected_user == select_max_rate(nb));
  CHECK(su1.achieved_rate == doctest::Approx(nb[static_cast<std::size_t>(su1.selected_user)]));

  CMatrix clone(2, 16);
  for (int m = 0; m < 16; ++m) {
    clone(0, m) = r.complex_normal();
    clone(1, m) = 10.0 * clone(0, m);
  }
  CHECK(select_su_ofdm(clone, 0.5).selected_user == 1);

  CMatrix single(1, 32);
  for (auto& z : single.data()) z = r.complex_normal();
  const double own = subcarrier_sum_rate(single.row(0), 0.3);
  CHECK(select_su_ofdm(single, 0.3).achieved_rate == own);
  CHECK(select_ofdma(single, 0.3).achieved_rate == doctest::Approx(own).epsilon(1e-15));

  CMatrix crossed(2, 2);
  crossed(0, 0) = {3.0, 0.0};
  crossed(0, 1) = {0.1, 0.0};
  crossed(1, 0) = {0.2, 0.0};
  crossed(1, 1) = {2.0, 0.0};
  const SlotDecision o = select_ofdma(crossed, 1.0);
  CHECK(o.subcarrier_users == std::vector<int>{0, 1});
  CHECK(o.achieved_rate == doctest::Approx(std::log2(10.0) + std::log2(5.0)));

  for (int t = 0; t < 2000; ++t) {
    CMatrix g(4, 8);
    for (auto& z : g.data()) z = r.complex_normal();
    REQUIRE(select_ofdma(g, 1.0).achieved_rate >= select_su_ofdm(g, 1.0).achieved_rate);
  }
}
