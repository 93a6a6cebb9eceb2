// SPDX-License-Identifier: BSD-3-Clause
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glc/analysis.hpp"
#include "glc/domains.hpp"
#include "glc/planner.hpp"

using namespace glc;

namespace {

Problem open_plane(State goal_center, double goal_radius) {
  Problem p;
  p.system = systems::single_integrator_2d();
  p.x_ic = {0.0, 0.0};
  p.goal = Region::ball(std::move(goal_center), goal_radius);
  return p;
}

PlannerParams small_params(unsigned r, double c, double eta, std::uint64_t h) {
  PlannerParams p;
  p.resolution = r;
  p.segment_scale = c;
  p.eta = eta;
  p.horizon = h;
  p.delta_max = 0.05;
  return p;
}

}  // namespace

TEST(Threshold, MinTimeIsZero) {
  PlannerParams p = small_params(5, 10.0, 3.0, 20);
  for (const auto& name : {"shortest_path", "pendulum", "acrobot", "point_robot_3d", "wheeled_robot_min_time"})
    EXPECT_EQ(glc_threshold(p, benchmarks::by_name(name).system()), 0.0) << name;
}

TEST(Threshold, KinematicLimit) {
  SystemModel s = systems::single_integrator_2d();
  s.lipschitz_g = 1.0;
  PlannerParams p = small_params(10, 1.0, 10.0, 5);  // h / R = 0.5
  EXPECT_NEAR(glc_threshold(p, s), std::sqrt(2.0) / 10.0 * 0.5, 1e-15);
  EXPECT_NEAR(glc_threshold(p, s), 0.0707107, 1e-7);
}

TEST(Threshold, GeneralFormulaAndLimitOrdering) {
  SystemModel s = systems::single_integrator_2d();
  s.lipschitz_g = 1.0;
  s.lipschitz_f = 1.0;
  PlannerParams p = small_params(10, 1.0, 10.0, 5);
  const double value = glc_threshold(p, s);
  EXPECT_NEAR(value, std::sqrt(2.0) / 10.0 * (std::exp(0.5) - 1.0), 1e-15);
  EXPECT_NEAR(value, 0.0917430, 1e-7);
  s.lipschitz_f = 0.0;
  EXPECT_LT(glc_threshold(p, s), value);
  s.lipschitz_f = 1e-9;  // the L_f -> 0 limit is continuous
  EXPECT_NEAR(glc_threshold(p, s), std::sqrt(2.0) / 10.0 * 0.5, 1e-9);
}

TEST(Threshold, WheeledRobotQuadraticCost) {
  const auto b = benchmarks::wheeled_robot(true);
  const auto p = b.params_for(4);
  const double expected = std::sqrt(3.0) / p.eta * 4.0 * std::expm1(static_cast<double>(p.horizon) / 4.0);
  EXPECT_NEAR(glc_threshold(p, b.system()), expected, 1e-12 * expected);
}

TEST(Prunes, Examples) {
  EXPECT_TRUE(prunes(1.0, 2.0, 2.0, 3.0, 0.5));
  EXPECT_FALSE(prunes(3.0, 1.0, 2.0, 5.0, 0.0));
  EXPECT_FALSE(prunes(1.0, 2.0, 2.0, 2.4, 0.5));
}

TEST(Prunes, MinTimeReducesToOrderComparisons) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> v(0.0, 3.0);
  for (int t = 0; t < 10000; ++t) {
    const double t1 = std::round(v(rng) * 2) / 2, t2 = std::round(v(rng) * 2) / 2;
    const double j1 = std::round(v(rng) * 2) / 2, j2 = std::round(v(rng) * 2) / 2;
    EXPECT_EQ(prunes(t1, j1, t2, j2, 0.0), t1 <= t2 && j1 <= j2);
  }
}

TEST(CheckFeasible, Examples) {
  SampledTrajectory s(2);
  s.push_back(0.0, State{0.5, 0.5});
  s.push_back(0.1, State{0.6, 0.5});
  const Region unit = Region::box({0.0, 0.0}, {1.0, 1.0});
  EXPECT_TRUE(check_feasible(s, unit));
  s.push_back(0.2, State{1.5, 0.5});
  EXPECT_FALSE(check_feasible(s, unit));
  EXPECT_TRUE(check_feasible(s, Region::everything()));
}

TEST(Plan, SingleIntegratorExample) {
  const Problem prob = open_plane({2.0, 0.0}, 0.5);
  const PlannerParams p = small_params(5, 10.0, 1.0, 4);
  const PlanOutcome o = plan(prob, p);
  ASSERT_TRUE(o.solved());
  EXPECT_GE(o.cost, 1.5);
  EXPECT_DOUBLE_EQ(o.cost, 2.0);
  EXPECT_EQ(o.signal->size(), 1u);

  OracleOptions opt;
  opt.resolution = 5;
  opt.segment_scale = 10.0;
  opt.depth_limit = 4;
  opt.delta_max = p.delta_max;
  const OracleResult oracle = exhaustive_best(prob, opt);
  EXPECT_EQ(oracle.best_cost, o.cost);
}

TEST(Plan, GoalAtStartReturnsRoot) {
  const Problem prob = open_plane({0.0, 0.0}, 1.0);
  const PlanOutcome o = plan(prob, small_params(3, 1.0, 1.0, 5));
  ASSERT_TRUE(o.solved());
  EXPECT_EQ(o.cost, 0.0);
  EXPECT_TRUE(o.signal->empty());
  EXPECT_EQ(o.stats.nodes_expanded, 0u);
  EXPECT_EQ(o.trajectory.size(), 1u);
}

TEST(Plan, SealedStartReturnsInfinity) {
  Problem prob = open_plane({5.0, 0.0}, 0.5);
  prob.free = Region::box({-1.0, -1.0}, {1.0, 1.0});  // everything else is obstacle
  const PlanOutcome o = plan(prob, small_params(3, 3.0, 4.0, 4));
  EXPECT_FALSE(o.solved());
  EXPECT_EQ(o.cost, kInfinity);
  EXPECT_TRUE(o.trajectory.empty());
  EXPECT_FALSE(o.budget_exhausted);
  EXPECT_GT(o.stats.nodes_pruned_infeasible, 0u);
}

TEST(Plan, InvalidInputs) {
  const Problem prob = open_plane({2.0, 0.0}, 0.5);
  EXPECT_THROW(plan(prob, small_params(0, 1.0, 1.0, 3)), InvalidArgument);
  EXPECT_THROW(plan(prob, small_params(2, 0.0, 1.0, 3)), InvalidArgument);
  EXPECT_THROW(plan(prob, small_params(2, 1.0, 0.0, 3)), InvalidArgument);
  EXPECT_THROW(plan(prob, small_params(2, 1.0, 1.0, 0)), InvalidArgument);
  Problem bad = prob;
  bad.free = Region::ball({10.0, 10.0}, 1.0);
  EXPECT_THROW(plan(bad, small_params(2, 1.0, 1.0, 3)), InvalidArgument);
  bad = prob;
  bad.x_ic = {0.0};
  EXPECT_THROW(plan(bad, small_params(2, 1.0, 1.0, 3)), InvalidArgument);
}

TEST(Plan, DepthLimitCountsChildren) {
  // h = 1 admits only the root; a goal one segment away is unreachable.
  const Problem prob = open_plane({1.0, 0.0}, 0.5);
  const PlanOutcome o = plan(prob, small_params(2, 2.0, 1.0, 1));
  EXPECT_FALSE(o.solved());
  EXPECT_EQ(o.stats.nodes_expanded, 1u);
  EXPECT_EQ(o.stats.nodes_pruned_depth, 4u);
  const PlanOutcome o2 = plan(prob, small_params(2, 2.0, 1.0, 2));
  ASSERT_TRUE(o2.solved());
  EXPECT_DOUBLE_EQ(o2.cost, 1.0);
}

TEST(Plan, ExpansionLimitStopsTheSearch) {
  const Problem prob = open_plane({50.0, 0.0}, 0.1);
  PlannerParams p = small_params(4, 4.0, 5.0, 1000);
  p.expansion_limit = 100;
  const PlanOutcome o = plan(prob, p);
  EXPECT_FALSE(o.solved());
  EXPECT_TRUE(o.budget_exhausted);
  EXPECT_EQ(o.stats.nodes_expanded, 100u);
}

namespace {

// Single integrator with a goal ball and one box obstacle between start and goal.
Problem wall_problem() {
  Problem p;
  p.system = systems::single_integrator_2d();
  p.x_ic = {0.0, 0.0};
  p.free = !Region::box({0.8, -0.6}, {1.2, 0.6});
  p.goal = Region::ball({2.0, 0.0}, 0.6);
  return p;
}

}  // namespace

TEST(Plan, BoundedByOracleOnRandomInstances) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> gx(0.5, 3.0), gy(-1.5, 1.5), rad(0.2, 0.8), eta(0.5, 20.0);
  for (int t = 0; t < 40; ++t) {
    Problem prob;
    prob.system = systems::single_integrator_2d();
    prob.x_ic = {0.0, 0.0};
    prob.free = !Region::box({0.6, -0.4 + gy(rng) * 0.2}, {0.9, 0.4});
    prob.goal = Region::ball({gx(rng), gy(rng)}, rad(rng));
    const unsigned r = 2 + t % 2;
    const std::uint64_t h = 3 + t % 2;
    PlannerParams p = small_params(r, 2.0 * r, eta(rng), h);
    p.check_invariants = true;
    const PlanOutcome o = plan(prob, p);
    EXPECT_EQ(o.invariants.total(), 0u);

    OracleOptions opt;
    opt.resolution = r;
    opt.segment_scale = p.segment_scale;
    opt.depth_limit = h;
    opt.delta_max = p.delta_max;
    const OracleResult exact = exhaustive_best(prob, opt);
    opt.clearance = epsilon_bound(p, prob.system);
    const OracleResult interior = exhaustive_best(prob, opt);
    EXPECT_GE(o.cost, exact.best_cost) << t;
    EXPECT_LE(o.cost, interior.best_cost) << t;
    if (o.solved()) { EXPECT_TRUE(std::isfinite(exact.best_cost)); }
  }
}

TEST(Plan, ReturnedSignalIsFeasibleAndReachesGoal) {
  const Problem prob = wall_problem();
  PlannerParams p = small_params(6, 3.0, 8.0, 12);
  const PlanOutcome o = plan(prob, p);
  ASSERT_TRUE(o.solved());
  const Rollout r = rollout(prob.system, prob.x_ic, *o.signal, p.delta_max);
  EXPECT_TRUE(check_feasible(r.samples, prob.free));
  EXPECT_TRUE(prob.goal.contains(r.terminal_state));
  EXPECT_EQ(r.cost, o.cost);
  EXPECT_EQ(r.samples.times(), o.trajectory.times());
}

TEST(Plan, InvariantsOnInstrumentedRun) {
  const Problem prob = wall_problem();
  PlannerParams p = small_params(8, 3.0, 6.0, 20);
  p.check_invariants = true;
  const PlanOutcome o = plan(prob, p);
  ASSERT_TRUE(o.solved());
  EXPECT_EQ(o.invariants.total(), 0u);
  EXPECT_GT(o.invariants.prunes.size(), 0u);
  EXPECT_EQ(o.stats.labels, o.stats.labels_created);
}

TEST(Plan, HeuristicDoesNotChangeCost) {
  const Problem prob = wall_problem();
  PlannerParams p = small_params(6, 3.0, 8.0, 12);
  const PlanOutcome plain = plan(prob, p);
  p.heuristic = [](std::span<const double> x) {
    return std::max(0.0, std::hypot(x[0] - 2.0, x[1]) - 0.6);
  };
  const PlanOutcome guided = plan(prob, p);
  ASSERT_TRUE(plain.solved());
  ASSERT_TRUE(guided.solved());
  EXPECT_EQ(plain.cost, guided.cost);
  EXPECT_LE(guided.stats.nodes_expanded, plain.stats.nodes_expanded);
}

TEST(Plan, Deterministic) {
  const Problem prob = wall_problem();
  const PlannerParams p = small_params(7, 3.0, 8.0, 15);
  const PlanOutcome a = plan(prob, p);
  const PlanOutcome b = plan(prob, p);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.signal->controls, b.signal->controls);
  EXPECT_EQ(a.stats.nodes_expanded, b.stats.nodes_expanded);
  EXPECT_EQ(a.stats.labels, b.stats.labels);
}

TEST(Plan, FrozenPendulumCosts) {
  // Regression values from this implementation.
  const auto b = benchmarks::pendulum();
  const std::vector<std::pair<unsigned, double>> expected{{5, 19.2}, {6, 16.0}, {7, 15.0 + 3.0 / 7.0}, {8, 15.0}};
  for (const auto& [r, cost] : expected) {
    const PlanOutcome o = plan(b.problem, b.params_for(r));
    ASSERT_TRUE(o.solved()) << r;
    EXPECT_NEAR(o.cost, cost, 1e-9) << r;
  }
}
