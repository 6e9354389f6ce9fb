#include <gtest/gtest.h>

#include "cmab/metrics.hpp"

using namespace cmab;

TEST(Regret, HomogeneousRound) {
  const auto inst = build_instance({3.0, 2.1, 1.0}, 0.1, 5, full_arm_sets(3, 2));
  const std::vector<ArmId> arms{1, 0};
  EXPECT_NEAR(round_regret(inst, arms, RegretMode::Homogeneous), 0.9, 1e-12);
  const PullHistory h{{1, 2}, {0, 0}};
  const auto r = regret(inst, h, RegretMode::Homogeneous);
  EXPECT_NEAR(r.back(), 2.9, 1e-12);
}

TEST(Regret, HeterogeneousLinearWhenStuck) {
  const auto inst = fixture("fig1b");
  EXPECT_DOUBLE_EQ(benchmark_reward(inst, RegretMode::Heterogeneous), 17.0);
  const PullHistory h(50, std::vector<ArmId>{1, 2});
  const auto r = regret(inst, h, RegretMode::Heterogeneous);
  for (std::size_t t = 0; t < r.size(); ++t)
    EXPECT_DOUBLE_EQ(r[t], 6.0 * static_cast<double>(t + 1));
}

TEST(Regret, ModeMismatch) {
  try {
    benchmark_reward(fixture("fig1b"), RegretMode::Homogeneous);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ModeMismatch);
  }
}

TEST(OptimalFraction, PerAgent) {
  const auto inst = fixture("fig1b");
  const PullHistory h{{0, 1}, {1, 1}, {0, 2}, {0, 1}};
  EXPECT_DOUBLE_EQ(per_agent_optimal_fraction(inst, h, 0), 0.75);
  EXPECT_DOUBLE_EQ(per_agent_optimal_fraction(inst, h, 1), 0.75);
  EXPECT_DOUBLE_EQ(per_agent_optimal_fraction(inst, {}, 1), 0.0);
}

TEST(Cost, RunningAbsoluteSum) {
  const std::vector<double> g{1.0, -2.0, 0.0, 0.5};
  EXPECT_EQ(cumulative_cost(g), (std::vector<double>{1.0, 3.0, 3.0, 3.5}));
}

TEST(Cost, LedgerRecomputation) {
  AttackLedger ledger(3, 2);
  RoundRecord r1(2), r3(2);
  r1.t = 1;
  r1.arms = {0, 1};
  r1.gamma = {1.0, -0.5};
  r3.t = 3;
  r3.arms = {2, 2};
  r3.gamma = {0.0, 2.0};
  ledger.record(r1);
  ledger.record(r3);
  EXPECT_EQ(cumulative_cost(ledger, 4), (std::vector<double>{1.5, 1.5, 3.5, 3.5}));
  EXPECT_DOUBLE_EQ(ledger.total_cost(), 3.5);
  EXPECT_EQ(ledger.attacked_agents(), (std::vector<AgentId>{0, 1}));
  EXPECT_EQ(ledger.per_arm_cost(), (std::vector<double>{1.0, 0.5, 2.0}));
  EXPECT_THROW(cumulative_cost(ledger, 2), Error);
}

TEST(Cost, AdditiveOverDisjointRounds) {
  const std::vector<double> a{0.5, 1.0, 2.0};
  const std::vector<double> b{3.0, 0.25};
  std::vector<double> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  EXPECT_DOUBLE_EQ(cumulative_cost(ab).back(),
                   cumulative_cost(a).back() + cumulative_cost(b).back());
}

TEST(TimeGrid, Shapes) {
  const auto g = time_grid(100000, 100);
  EXPECT_EQ(g.size(), 1001u);
  EXPECT_EQ(g.front(), 1u);
  EXPECT_EQ(g[1], 100u);
  EXPECT_EQ(g.back(), 100000u);
  EXPECT_EQ(time_grid(250, 100), (std::vector<Round>{1, 100, 200, 250}));
  EXPECT_EQ(time_grid(1, 100), (std::vector<Round>{1}));
  EXPECT_EQ(time_grid(3, 1), (std::vector<Round>{1, 2, 3}));
}

TEST(Recorder, MatchesDirectComputation) {
  const auto inst = fixture("fig1b");
  RunResult out;
  RunRecorder rec(inst, RegretMode::Heterogeneous, 2, time_grid(4, 2));
  const PullHistory h{{0, 1}, {1, 2}, {0, 2}, {1, 1}};
  for (Round t = 0; t < h.size(); ++t) {
    RoundRecord r(2);
    r.t = t + 1;
    r.arms = h[t];
    r.gamma = {0.0, t == 2 ? -1.5 : 0.0};
    rec.record(r, 1, out);
  }
  rec.finish(out);
  EXPECT_EQ(out.grid, (std::vector<Round>{1, 2, 4}));
  const auto direct = regret(inst, h, RegretMode::Heterogeneous);
  EXPECT_DOUBLE_EQ(out.regret.back(), direct.back());
  EXPECT_DOUBLE_EQ(out.final_regret, direct.back());
  EXPECT_DOUBLE_EQ(out.final_cost, 1.5);
  EXPECT_EQ(out.target_pulls.back(), 2u);
  EXPECT_DOUBLE_EQ(out.target_fraction, 2.0 / 8.0);
  EXPECT_DOUBLE_EQ(out.optimal_fraction.back()[0], per_agent_optimal_fraction(inst, h, 0));
}
