#include <gtest/gtest.h>

#include <numeric>

#include "helpers.hpp"

using namespace dgsched;
using namespace dgsched::testing;

namespace {

double lp_sum(const NetworkModel& m, double eps = 0.0, std::optional<int> cap = std::nullopt) {
  const auto r = solve_capacity_lp(m, min_rate_vector(m), eps, cap);
  EXPECT_TRUE(r.feasible) << r.message;
  return r.optimum;
}

} // namespace

TEST(CapacityLp, SingleLink) {
  const NetworkModel m = chain(2);
  EXPECT_NEAR(lp_sum(m), 1.0, 1e-9);
  EXPECT_NEAR(lp_sum(m, 0.25), 0.75, 1e-9);
}

TEST(CapacityLp, AdmissionCapBinds) {
  NetworkModel m = chain(2);
  m.links[0].capacity = 5;
  EXPECT_NEAR(lp_sum(m, 0.0, 2), 2.0, 1e-9);
  EXPECT_NEAR(lp_sum(m, 0.0), 5.0, 1e-9);
}

TEST(CapacityLp, TwoHopChainHalves) {
  EXPECT_NEAR(lp_sum(chain(3)), 0.5, 1e-9);
}

TEST(CapacityLp, SharedRelayNeedsTheRelayTwice) {
  const auto lm = load_scenario("shared_relay.yaml");
  EXPECT_NEAR(lp_sum(lm.model), 0.5, 1e-9);
}

TEST(CapacityLp, InfeasibleMinimumRate) {
  const NetworkModel m = chain(2, 1.2);
  const auto r = solve_capacity_lp(m, min_rate_vector(m), 0.0);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.message.empty());
  const auto capped = solve_capacity_lp(chain(2, 0.9), std::vector<double>{0.9}, 0.2, 1);
  EXPECT_FALSE(capped.feasible);
}

TEST(CapacityLp, MonotoneInEpsilon) {
  const auto lm = load_scenario("fig1_like.yaml");
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.0, 0.02, 0.05, 0.1}) {
    const double v = lp_sum(lm.model, eps);
    EXPECT_LE(v, prev + 1e-9);
    prev = v;
  }
}

TEST(CapacityLp, IndependentLinksAddUp) {
  NetworkModel m = named_nodes(4);
  m.links = {{0, 1, 2}, {2, 3, 3}};
  m.interference.kind = InterferenceKind::ConflictGraph;
  m.flows = {flow(0, 1), flow(2, 3)};
  EXPECT_NEAR(lp_sum(m), 5.0, 1e-9);
  m.interference.conflicts = {{0, 1}};
  EXPECT_NEAR(lp_sum(m), 3.0, 1e-9);  // all time on the faster link
}

TEST(CapacityLp, FadingUsesMeanCapacity) {
  NetworkModel m = chain(2);
  m.links[0].fading_states = {0, 1, 2};
  const auto r = solve_capacity_lp(m, min_rate_vector(m), 0.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.optimum, 1.0, 1e-9);
  EXPECT_EQ(r.channel_states, 3u);
}

TEST(CapacityLp, Fig1LikeOptimum) {
  const auto lm = load_scenario("fig1_like.yaml");
  const auto r = solve_capacity_lp(lm.model, min_rate_vector(lm.model), 0.0, lm.config.admit_max);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.optimum, 7.0 / 6.0, 1e-7);
  for (FlowId c = 0; c < lm.model.num_flows(); ++c) EXPECT_GE(r.rates[c], lm.model.flows[c].min_rate - 1e-9);
}

TEST(CapacityLp, GeneralFadingOptimum) {
  const auto lm = load_scenario("general_fading.yaml");
  EXPECT_NEAR(lp_sum(lm.model), 0.895833333, 1e-6);
}

TEST(CapacityLp, RefusesMoreThanTwentyLinks) {
  NetworkModel m = named_nodes(22);
  for (std::size_t i = 0; i + 1 < 22; ++i) m.links.push_back({i, i + 1});
  m.flows = {flow(0, 21)};
  EXPECT_THROW(solve_capacity_lp(m, min_rate_vector(m), 0.0), SizeError);
}

TEST(BruteForce, MatchingExamples) {
  using E = WeightedEdge<std::int64_t>;
  EXPECT_EQ(brute_force_matchings<std::int64_t>(3, std::vector<E>{}).weight, 0);
  EXPECT_EQ(brute_force_matchings<std::int64_t>(3, std::vector<E>{{0, 1, 3}, {1, 2, 5}}).weight, 5);
  EXPECT_EQ(brute_force_matchings<std::int64_t>(4, std::vector<E>{{0, 1, 2}, {1, 2, 3}, {2, 3, 2}}).weight, 4);
  EXPECT_THROW(brute_force_matchings<std::int64_t>(30, std::vector<E>(21, E{0, 1, 1})), SizeError);
}

TEST(BruteForce, MaximalActivationSets) {
  ConflictGraph g(3);
  g.add_conflict(0, 1);
  // {0, 2} and {1, 2}
  auto sets = maximal_activation_sets(g);
  std::sort(sets.begin(), sets.end());
  EXPECT_EQ(sets, (std::vector<std::uint32_t>{0b101, 0b110}));
  EXPECT_EQ(maximal_activation_sets(ConflictGraph(0)), (std::vector<std::uint32_t>{0}));
}

TEST(Constants, BoundConstantExample) {
  // N = 2, K = 1, q = 4, mu = 2, rho = 10, a = 0
  const NetworkModel m = chain(2, 0.0, 10.0);
  SimConfig c;
  c.q_max = 4;
  c.admit_max = 2;
  EXPECT_DOUBLE_EQ(bound_constant_B(m, c), 244.0);
  const std::vector<double> r{1.0};
  const auto t = compute_constants(m, c, r, 0.1);
  EXPECT_DOUBLE_EQ(t.B, 244.0);
  EXPECT_DOUBLE_EQ(t.B_R, 2.0);
  EXPECT_DOUBLE_EQ(t.B_prime, 244.0 + 1000.0 * 2.0);
  EXPECT_DOUBLE_EQ(t.B1, 244.0 + 4.0);
  EXPECT_DOUBLE_EQ(t.throughput_floor, 1.0 - 0.244);
}

TEST(Constants, NoDelayCollapsesDelayedConstant) {
  const auto lm = load_scenario("fig1_like.yaml");
  SimConfig c = lm.config;
  c.feedback_delay = 0;
  const auto lp = solve_capacity_lp(lm.model, min_rate_vector(lm.model), 0.05, c.admit_max);
  const auto t = compute_constants(lm.model, c, lp.rates, 0.05);
  EXPECT_DOUBLE_EQ(t.B3, t.B);
  EXPECT_DOUBLE_EQ(t.B4, t.B_prime);
  c.feedback_delay = 5;
  EXPECT_GT(compute_constants(lm.model, c, lp.rates, 0.05).B3, t.B);
}

TEST(Constants, FullGammaMatchesExactConstants) {
  const auto lm = load_scenario("single_link.yaml");
  const auto lp = solve_capacity_lp(lm.model, min_rate_vector(lm.model), 0.25, lm.config.admit_max);
  const auto t = compute_constants(lm.model, lm.config, lp.rates, 0.25, 1.0);
  EXPECT_DOUBLE_EQ(t.B_bar, t.B_prime);
  EXPECT_DOUBLE_EQ(t.sub_throughput_floor, t.throughput_floor);
  ASSERT_TRUE(t.delta && t.sub_delta);
  EXPECT_DOUBLE_EQ(*t.delta, *t.sub_delta);
}

TEST(Constants, SingleLinkDelta) {
  const auto lm = load_scenario("single_link.yaml");
  const auto lp = solve_capacity_lp(lm.model, min_rate_vector(lm.model), 0.25, lm.config.admit_max);
  ASSERT_TRUE(lp.feasible);
  EXPECT_NEAR(lp.optimum, 0.75, 1e-9);
  const auto t = compute_constants(lm.model, lm.config, lp.rates, 0.25);
  ASSERT_TRUE(t.delta.has_value());
  EXPECT_NEAR(*t.delta, 0.025, 1e-9);
  EXPECT_NEAR(*t.virtual_ceiling, t.B_prime / 0.025, 1e-6);
}

TEST(Constants, TooSmallQueueHasNoDelta) {
  const auto lm = load_scenario("fig1_like.yaml");
  const auto lp = solve_capacity_lp(lm.model, min_rate_vector(lm.model), 0.05, lm.config.admit_max);
  const auto t = compute_constants(lm.model, lm.config, lp.rates, 0.05);
  EXPECT_FALSE(t.epsilon1.has_value());
  EXPECT_FALSE(t.delta.has_value());
}
