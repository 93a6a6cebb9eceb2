// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "glc/dynamics.hpp"
#include "glc/planner.hpp"
#include "glc/region.hpp"

namespace glc {

/// value(R) = coefficient * R^exponent * (ln R)^log_power, optionally rounded up.
struct ScalingLaw {
  double coefficient = 1.0;
  double exponent = 1.0;
  int log_power = 0;

  double operator()(unsigned resolution) const {
    const double r = static_cast<double>(resolution);
    return coefficient * std::pow(r, exponent) * std::pow(std::log(r), log_power);
  }

  /// Rounded up and clamped to at least 1, for depth limits.
  std::uint64_t ceil_at(unsigned resolution) const {
    const double v = std::ceil((*this)(resolution));
    return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
  }
};

/// One named benchmark: system, problem data and per-resolution parameters.
struct BenchmarkConfig {
  std::string name;
  Problem problem;
  double segment_scale = 1.0;
  ScalingLaw eta;
  ScalingLaw horizon;
  double delta_max = 0.1;
  Heuristic heuristic;  // empty when the benchmark has none
  std::vector<unsigned> resolution_sweep;

  const SystemModel& system() const { return problem.system; }

  PlannerParams params_for(unsigned resolution, bool use_heuristic = true) const {
    PlannerParams p;
    p.resolution = resolution;
    p.segment_scale = segment_scale;
    p.eta = eta(resolution);
    p.horizon = horizon.ceil_at(resolution);
    p.delta_max = delta_max;
    if (use_heuristic) p.heuristic = heuristic;
    return p;
  }
};

namespace systems {

inline double min_time_cost(std::span<const double>, std::span<const double>) { return 1.0; }

/// x' = u in the plane with unit-speed heading inputs and unit running cost.
inline SystemModel single_integrator_2d() {
  SystemModel s;
  s.name = "single_integrator";
  s.state_dim = 2;
  s.input_dim = 2;
  s.f = [](std::span<const double>, std::span<const double> u, std::span<double> dx) {
    dx[0] = u[0];
    dx[1] = u[1];
  };
  s.g = min_time_cost;
  s.omega = Sphere{1.0};
  s.lipschitz_f = 0.0;
  s.lipschitz_g = 0.0;
  s.max_speed = 1.0;
  s.max_input = 1.0;
  return s;
}

/// Torque-limited pendulum, state (theta, omega).
inline SystemModel pendulum() {
  SystemModel s;
  s.name = "pendulum";
  s.state_dim = 2;
  s.input_dim = 1;
  s.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = u[0] - std::sin(x[0]);
  };
  s.g = min_time_cost;
  s.omega = IntervalBox{{-0.2}, {0.2}};
  s.lipschitz_f = 1.0;   // ||df/dx|| <= max(1, |cos theta|)
  s.lipschitz_g = 0.0;
  s.max_speed = 3.25;    // |omega| <= 3 on the operating region
  s.max_input = 0.2;
  return s;
}

/// Physical constants of the two-link acrobot.
struct AcrobotParameters {
  double m1 = 1.0, m2 = 1.0;
  double l1 = 1.0, l2 = 1.0;
  double lc1 = 0.5, lc2 = 0.5;
  double i1 = 0.2, i2 = 1.0;
  double gravity = 9.8;
};

/// Acrobot with elbow torque, state (theta1, theta2, dtheta1, dtheta2).
/// theta1 is measured from the downward vertical, theta2 relative to link 1.
inline SystemModel acrobot(const AcrobotParameters& p = {}) {
  SystemModel s;
  s.name = "acrobot";
  s.state_dim = 4;
  s.input_dim = 1;
  s.f = [p](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    const double q1 = x[0], q2 = x[1], w1 = x[2], w2 = x[3];
    const double c2 = std::cos(q2), s2 = std::sin(q2);
    const double d11 = p.m1 * p.lc1 * p.lc1 +
                       p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) + p.i1 + p.i2;
    const double d22 = p.m2 * p.lc2 * p.lc2 + p.i2;
    const double d12 = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.i2;
    const double h1 = -p.m2 * p.l1 * p.lc2 * s2 * w2 * w2 - 2.0 * p.m2 * p.l1 * p.lc2 * s2 * w2 * w1;
    const double h2 = p.m2 * p.l1 * p.lc2 * s2 * w1 * w1;
    const double phi2 = p.m2 * p.lc2 * p.gravity * std::sin(q1 + q2);
    const double phi1 = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity * std::sin(q1) + phi2;
    // [d11 d12; d12 d22] [a1; a2] = [-h1 - phi1; u - h2 - phi2]
    const double b1 = -h1 - phi1;
    const double b2 = u[0] - h2 - phi2;
    const double det = d11 * d22 - d12 * d12;
    dx[0] = w1;
    dx[1] = w2;
    dx[2] = (d22 * b1 - d12 * b2) / det;
    dx[3] = (d11 * b2 - d12 * b1) / det;
  };
  s.g = min_time_cost;
  s.omega = IntervalBox{{-4.0}, {4.0}};
  // Sampled Jacobian norm and speed peak near 343 and 251 for |dtheta| <= 10.
  s.lipschitz_f = 400.0;
  s.lipschitz_g = 0.0;
  s.max_speed = 300.0;
  s.max_input = 4.0;
  return s;
}

/// Total mechanical energy of the acrobot, zero at the downward rest state.
inline double acrobot_energy(std::span<const double> x, const AcrobotParameters& p = {}) {
  const double q1 = x[0], q2 = x[1], w1 = x[2], w2 = x[3];
  const double c2 = std::cos(q2);
  const double d11 = p.m1 * p.lc1 * p.lc1 +
                     p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) + p.i1 + p.i2;
  const double d22 = p.m2 * p.lc2 * p.lc2 + p.i2;
  const double d12 = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.i2;
  const double kinetic = 0.5 * (d11 * w1 * w1 + 2.0 * d12 * w1 * w2 + d22 * w2 * w2);
  const double height1 = -p.lc1 * std::cos(q1);
  const double height2 = -p.l1 * std::cos(q1) - p.lc2 * std::cos(q1 + q2);
  const double rest = -(p.m1 * p.lc1 + p.m2 * (p.l1 + p.lc2)) * p.gravity;
  return kinetic + p.gravity * (p.m1 * height1 + p.m2 * height2) - rest;
}

inline constexpr double kPointRobotMaxSpeed = 7.0710678118654752;  // sqrt(50)

/// Point robot in R^3 with quadratic drag, state (position, velocity).
inline SystemModel point_robot_3d() {
  SystemModel s;
  s.name = "point_robot_3d";
  s.state_dim = 6;
  s.input_dim = 3;
  s.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    const double speed = std::sqrt(x[3] * x[3] + x[4] * x[4] + x[5] * x[5]);
    for (std::size_t i = 0; i < 3; ++i) {
      dx[i] = x[3 + i];
      dx[3 + i] = 5.0 * u[i] - 0.1 * x[3 + i] * speed;
    }
  };
  s.g = min_time_cost;
  s.omega = Ball{1.0};
  // Jacobian [[0, I], [0, -0.1 (|v| I + v v^T / |v|)]] with |v| <= sqrt(50).
  s.lipschitz_f = std::sqrt(3.0);
  s.lipschitz_g = 0.0;
  s.max_speed = std::sqrt(150.0);
  s.max_input = 1.0;
  return s;
}

/// Unicycle with unit forward speed and bounded turn rate, state (x, y, theta).
/// With quadratic_turn_cost the running cost is 1 + 2u^2, otherwise 1.
inline SystemModel wheeled_robot(bool quadratic_turn_cost = true) {
  SystemModel s;
  s.name = quadratic_turn_cost ? "wheeled_robot" : "wheeled_robot_min_time";
  s.state_dim = 3;
  s.input_dim = 1;
  s.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = u[0];
  };
  if (quadratic_turn_cost) {
    s.g = [](std::span<const double>, std::span<const double> u) { return 1.0 + 2.0 * u[0] * u[0]; };
    s.lipschitz_g = 4.0;  // |d/du (1 + 2u^2)| <= 4 on [-1, 1]
  } else {
    s.g = min_time_cost;
    s.lipschitz_g = 0.0;
  }
  s.omega = IntervalBox{{-1.0}, {1.0}};
  s.lipschitz_f = 1.0;
  s.max_speed = std::sqrt(2.0);
  s.max_input = 1.0;
  return s;
}

}  // namespace systems

namespace environments {

/// Free set: an open workspace box minus closed box obstacles.
inline Region workspace_minus_boxes(std::vector<double> lo, std::vector<double> hi,
                                    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& walls,
                                    std::vector<std::size_t> dims = {}) {
  std::vector<Region> parts{Region::box(std::move(lo), std::move(hi), dims)};
  for (const auto& [wlo, whi] : walls) parts.push_back(!Region::box(wlo, whi, dims));
  return Region::all_of(parts);
}

// Bug trap in a 10 x 10 workspace: a cup opening towards -x around the start,
// goal behind its closed end.
inline const std::vector<std::pair<std::vector<double>, std::vector<double>>> kBugTrapWalls{
    {{5.0, 3.0}, {5.5, 7.0}},  // back wall
    {{2.5, 6.5}, {5.5, 7.0}},  // upper arm
    {{2.5, 3.0}, {5.5, 3.5}},  // lower arm
};

// Two rooms split by the plane wall 4.5 <= x <= 5.5, with one 2 x 2 opening
// at 6 < y < 8, 2 < z < 4.
inline const std::vector<std::pair<std::vector<double>, std::vector<double>>> kTwoRoomWalls{
    {{4.5, 0.0, 0.0}, {5.5, 6.0, 10.0}},   // y below the opening
    {{4.5, 8.0, 0.0}, {5.5, 10.0, 10.0}},  // y above the opening
    {{4.5, 6.0, 0.0}, {5.5, 8.0, 2.0}},    // z below the opening
    {{4.5, 6.0, 4.0}, {5.5, 8.0, 10.0}},   // z above the opening
};

// Wheeled robot course: two blocks between start and goal.
inline const std::vector<std::pair<std::vector<double>, std::vector<double>>> kCourseWalls{
    {{3.0, 0.0}, {4.0, 5.0}},
    {{6.0, 4.0}, {7.0, 10.0}},
};

}  // namespace environments

namespace benchmarks {

inline BenchmarkConfig shortest_path() {
  BenchmarkConfig b;
  b.name = "shortest_path";
  b.problem.system = systems::single_integrator_2d();
  b.problem.x_ic = {4.0, 5.0};
  b.problem.free = environments::workspace_minus_boxes({0.0, 0.0}, {10.0, 10.0}, environments::kBugTrapWalls);
  b.problem.goal = Region::ball({8.0, 5.0}, 0.5);
  b.segment_scale = 10.0;
  b.eta = {1.0 / 300.0, 2.0, 0};
  b.horizon = {100.0, 1.0, 1};
  b.delta_max = 0.005;
  for (unsigned r = 20; r <= 200; r += 5) b.resolution_sweep.push_back(r);
  return b;
}

inline BenchmarkConfig pendulum() {
  BenchmarkConfig b;
  b.name = "pendulum";
  b.problem.system = systems::pendulum();
  b.problem.x_ic = {0.0, 0.0};
  b.problem.free = Region::everything();
  b.problem.goal = Region::ball({std::numbers::pi, 0.0}, 0.1) | Region::ball({-std::numbers::pi, 0.0}, 0.1);
  b.segment_scale = 6.0;
  b.eta = {1.0 / 16.0, 2.5, 0};
  b.horizon = {100.0, 1.0, 1};
  b.delta_max = 0.1;
  b.resolution_sweep = {4, 5, 6, 7, 8};
  return b;
}

inline BenchmarkConfig acrobot() {
  BenchmarkConfig b;
  b.name = "acrobot";
  b.problem.system = systems::acrobot();
  b.problem.x_ic = {0.0, 0.0, 0.0, 0.0};
  // Joint rates are bounded, angles are not wrapped.
  b.problem.free = Region::box({-10.0, -10.0}, {10.0, 10.0}, {2, 3});
  const double pi = std::numbers::pi;
  b.problem.goal = Region::ball({pi, 0.0, 0.0, 0.0}, 0.5) | Region::ball({-pi, 0.0, 0.0, 0.0}, 0.5);
  b.segment_scale = 6.0;
  b.eta = {1.0 / 16.0, 2.0, 0};
  b.horizon = {100.0, 1.0, 1};
  b.delta_max = 0.1;
  b.resolution_sweep = {5, 6, 7, 8, 9, 10};
  return b;
}

inline BenchmarkConfig point_robot_3d() {
  BenchmarkConfig b;
  b.name = "point_robot_3d";
  b.problem.system = systems::point_robot_3d();
  b.problem.x_ic = {2.0, 3.0, 7.0, 0.0, 0.0, 0.0};
  b.problem.free = environments::workspace_minus_boxes({0.0, 0.0, 0.0}, {10.0, 10.0, 10.0},
                                                       environments::kTwoRoomWalls, {0, 1, 2});
  const std::vector<double> goal_center{8.0, 3.0, 7.0};
  const double goal_radius = 0.5;
  b.problem.goal = Region::ball(goal_center, goal_radius, {0, 1, 2});
  // Remaining distance to the goal ball over the speed bound.
  b.heuristic = [goal_center, goal_radius](std::span<const double> x) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) d2 += (x[i] - goal_center[i]) * (x[i] - goal_center[i]);
    return std::max(0.0, std::sqrt(d2) - goal_radius) / systems::kPointRobotMaxSpeed;
  };
  b.segment_scale = 10.0;
  b.eta = {1.0 / 64.0, 1.5, 0};
  b.horizon = {100.0, 1.0, 1};
  b.delta_max = 0.1;
  b.resolution_sweep = {8, 9, 10, 11, 12, 13, 14};
  return b;
}

inline BenchmarkConfig wheeled_robot(bool quadratic_turn_cost = true) {
  BenchmarkConfig b;
  b.problem.system = systems::wheeled_robot(quadratic_turn_cost);
  b.name = b.problem.system.name;
  b.problem.x_ic = {1.0, 1.0, 0.0};
  b.problem.free = environments::workspace_minus_boxes({0.0, 0.0}, {10.0, 10.0}, environments::kCourseWalls, {0, 1});
  b.problem.goal = Region::ball({8.5, 8.5}, 1.0, {0, 1});
  b.segment_scale = 10.0;
  b.eta = {15.0, 5.0 / std::numbers::pi, 0};
  b.horizon = {5.0, 1.0, 1};
  b.delta_max = 0.02;
  b.resolution_sweep = {4, 5, 6, 7, 8, 9};
  return b;
}

inline std::vector<std::string> names() {
  return {"shortest_path", "pendulum", "acrobot", "point_robot_3d", "wheeled_robot", "wheeled_robot_min_time"};
}

inline BenchmarkConfig by_name(const std::string& name) {
  if (name == "shortest_path") return shortest_path();
  if (name == "pendulum") return pendulum();
  if (name == "acrobot") return acrobot();
  if (name == "point_robot_3d") return point_robot_3d();
  if (name == "wheeled_robot") return wheeled_robot(true);
  if (name == "wheeled_robot_min_time") return wheeled_robot(false);
  throw InvalidArgument("unknown benchmark: " + name);
}

}  // namespace benchmarks

}  // namespace glc
