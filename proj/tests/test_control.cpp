#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace dgsched;
using namespace dgsched::testing;

namespace {

SimConfig cfg(int q, int mu, double V) {
  SimConfig c;
  c.q_max = q;
  c.admit_max = mu;
  c.V = V;
  return c;
}

} // namespace

TEST(ControlBacklogged, ZeroStateAdmits) {
  const auto c = cfg(5, 2, 1000);
  EXPECT_DOUBLE_EQ(backlogged_threshold(0, 0, 0, 50, c), -1000);
  EXPECT_DOUBLE_EQ(backlogged_rate(0, 0, 0, 50, c), 2);
}

TEST(ControlBacklogged, LargeTransportBacklogStops) {
  const auto c = cfg(5, 2, 1000);
  EXPECT_DOUBLE_EQ(backlogged_threshold(10000, 0, 0, 50, c), 5000);
  EXPECT_DOUBLE_EQ(backlogged_rate(10000, 0, 0, 50, c), 0);
}

TEST(ControlBacklogged, ExactTieAdmits) {
  // (2/4) * 2000 = 0 * rho + 0 + 1000
  const auto c = cfg(4, 2, 1000);
  EXPECT_EQ(backlogged_threshold(2000, 0, 0, 50, c), 0.0);
  EXPECT_DOUBLE_EQ(backlogged_rate(2000, 0, 0, 50, c), 2);
  // same tie reached through x and z
  EXPECT_EQ(backlogged_threshold(2100, 1, 0, 40, cfg(4, 2, 1010)), 0.0);
  EXPECT_DOUBLE_EQ(backlogged_rate(2100, 1, 0, 40, cfg(4, 2, 1010)), 2);
}

TEST(ControlBacklogged, UsesEveryFlowsOwnState) {
  NetworkModel m = chain(2, 0, 10);
  m.flows.push_back(flow(0, 1, 0, 1));
  VirtualQueues vq(2, 0);
  vq[0].u_s = vq[1].u_s = 3000;
  vq[0].x = vq[1].x = 60;
  const auto d = control_backlogged(vq, m, cfg(5, 2, 1000));
  // flow 0: 1800 - 600 - 1000 = 200 > 0; flow 1: 1800 - 60 - 1000 > 0
  EXPECT_EQ(d.R, (std::vector<double>{0, 0}));
  vq[0].x = 100;
  EXPECT_EQ(control_backlogged(vq, m, cfg(5, 2, 1000)).R, (std::vector<double>{2, 0}));
}

TEST(ControlBacklogged, MonotoneInTransportBacklog) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 5000);
  const auto c = cfg(7, 3, 800);
  for (int i = 0; i < 5000; ++i) {
    const double x = u(rng) / 100, z = u(rng) / 100, rho = 1 + u(rng) / 100;
    double prev = backlogged_rate(0, x, z, rho, c);
    for (double us = 0; us < 5000; us += 97) {
      const double r = backlogged_rate(us, x, z, rho, c);
      ASSERT_TRUE(r == 0 || r == 3);
      ASSERT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(ControlArbitrary, AuxiliaryZeroStateOpens) {
  SimConfig c = cfg(5, 2, 1000);
  c.eta = 1;
  EXPECT_DOUBLE_EQ(auxiliary_rate(0, c), 2);
}

TEST(ControlArbitrary, AuxiliaryTieCloses) {
  SimConfig c = cfg(5, 2, 1000);
  c.eta = 2;
  EXPECT_DOUBLE_EQ(auxiliary_rate(500, c), 0);
  EXPECT_DOUBLE_EQ(auxiliary_rate(499.5, c), 2);
}

TEST(ControlArbitrary, RateTakesAvailableData) {
  SimConfig c = cfg(5, 2, 1000);
  FlowVirtualState s;
  s.y = 5;
  s.l = 0;
  EXPECT_DOUBLE_EQ(arbitrary_rate(s, 1, 10, c), 1);  // min(L + A, mu_M)
  s.l = 4;
  EXPECT_DOUBLE_EQ(arbitrary_rate(s, 1, 10, c), 2);
}

TEST(ControlArbitrary, RateTieCloses) {
  SimConfig c = cfg(5, 2, 1000);
  FlowVirtualState s;
  s.u_s = 50;  // 0.6 * 50 = 30 = y
  s.y = 30;
  EXPECT_DOUBLE_EQ(arbitrary_rate(s, 2, 10, c), 0);
}

TEST(ControlArbitrary, VectorForm) {
  NetworkModel m = chain(2);
  m.flows.push_back(flow(0, 1));
  SimConfig c = cfg(5, 2, 10);
  c.variant = Variant::ArbitraryArrivals;
  VirtualQueues vq(2, 0);
  vq[1].y = 10;
  const std::vector<double> a{1, 1};
  const auto d = control_arbitrary(vq, a, m, c);
  EXPECT_EQ(d.v, (std::vector<double>{2, 0}));
  // all-zero state sits exactly on the ">= 0 closes" boundary
  EXPECT_EQ(d.R, (std::vector<double>{0, 1}));
}

TEST(ControlDelayed, ZeroDelayMatchesBacklogged) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 3000);
  NetworkModel m = chain(2, 0.1, 20);
  m.flows.push_back(flow(0, 1, 0.2, 35));
  const auto c = cfg(6, 2, 900);
  VirtualQueues vq(2, 0);
  for (int t = 0; t < 2000; ++t) {
    for (FlowId f = 0; f < 2; ++f) {
      vq[f].u_s = u(rng);
      vq[f].x = u(rng) / 30;
      vq[f].z = u(rng) / 300;
    }
    vq.advance_history();
    ASSERT_EQ(control_delayed(vq, m, c).R, control_backlogged(vq, m, c).R);
  }
}

TEST(ControlDelayed, PreHistoryUsesZero) {
  // t = 3 with T = 5: X(t - T) is the initial value 0
  NetworkModel m = chain(2, 0, 100);
  const auto c = cfg(5, 2, 1000);
  VirtualQueues vq(1, 5);
  for (int t = 0; t < 3; ++t) {
    vq[0].x = 1000.0 * (t + 1);
    vq.advance_history();
  }
  vq[0].u_s = 1700;  // 1020 - 0 - 0 - 1000 > 0 with x = 0; < 0 with x = 3000
  EXPECT_DOUBLE_EQ(vq.delayed_x(0), 0);
  EXPECT_DOUBLE_EQ(control_delayed(vq, m, c).R[0], 0);
  EXPECT_DOUBLE_EQ(control_backlogged(vq, m, c).R[0], 2);
}

TEST(ControlDelayed, ReadsOldestRingEntry) {
  NetworkModel m = chain(2, 0, 1);
  const auto c = cfg(5, 2, 1000);
  VirtualQueues vq(1, 2);
  vq[0].x = 7;
  vq.advance_history();
  vq[0].x = 9;
  vq.advance_history();
  vq[0].u_s = 1670;  // 1002 - x - 1000 > 0 only for x = 0
  EXPECT_DOUBLE_EQ(control_delayed(vq, m, c).R[0], 0);
  EXPECT_DOUBLE_EQ(control_backlogged(vq, m, c).R[0], 2);
}
