// SPDX-License-Identifier: BSD-3-Clause
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "glc/analysis.hpp"
#include "glc/cli/config.hpp"
#include "glc/cli/sweep.hpp"

using namespace glc;
using namespace glc::cli;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("glc_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

const char* kTinyConfig = R"({
  "benchmark": {
    "name": "tiny",
    "system": {"family": "single_integrator_2d"},
    "x_ic": [0, 0],
    "free": {"all_of": [{"box": {"lo": [-5, -5], "hi": [5, 5]}},
                        {"not": {"box": {"lo": [0.8, -0.6], "hi": [1.2, 0.6]}}}]},
    "goal": {"ball": {"center": [2, 0], "radius": 0.6}},
    "segment_scale": 3,
    "eta": {"coefficient": 1, "exponent": 1},
    "horizon": {"coefficient": 4, "exponent": 1, "log_power": 1},
    "delta_max": 0.05,
    "resolutions": [3, 4, 5, 6]
  },
  "emit_trajectory": true
})";

}  // namespace

TEST(BestSoFar, Examples) {
  EXPECT_EQ(best_so_far({5.0, 6.0, 4.0}), (std::vector<double>{5.0, 5.0, 4.0}));
  EXPECT_EQ(best_so_far({kInfinity, kInfinity}), (std::vector<double>{kInfinity, kInfinity}));
  EXPECT_EQ(best_so_far({3.2}), (std::vector<double>{3.2}));
  EXPECT_EQ(best_so_far({kInfinity, 2.0, kInfinity}), (std::vector<double>{kInfinity, 2.0, 2.0}));
}

TEST(RegionJson, AllKinds) {
  const Region r = region_from_json(json::parse(R"({"all_of": [
      {"box": {"lo": [0, 0], "hi": [10, 10]}},
      {"not": {"any_of": [{"ball": {"center": [5, 5], "radius": 1}},
                          {"halfspace": {"normal": [1, 0], "offset": 1}}]}}]})"));
  EXPECT_TRUE(r.contains(State{8.0, 8.0}));
  EXPECT_FALSE(r.contains(State{5.0, 5.5}));
  EXPECT_FALSE(r.contains(State{0.5, 5.0}));
  EXPECT_TRUE(region_from_json(json::parse(R"({"everything": true})")).contains(State{1e6}));
  const Region sel = region_from_json(json::parse(R"({"ball": {"center": [1], "radius": 0.5, "dims": [2]}})"));
  EXPECT_TRUE(sel.contains(State{9.0, 9.0, 1.2}));
}

TEST(RegionJson, Errors) {
  EXPECT_THROW(region_from_json(json::parse(R"({"cone": {}})")), ConfigError);
  EXPECT_THROW(region_from_json(json::parse(R"({"box": {"lo": [1], "hi": [0]}})")), ConfigError);
  EXPECT_THROW(region_from_json(json::parse(R"({"ball": {"center": [0]}})")), ConfigError);
  EXPECT_THROW(region_from_json(json::parse(R"({"box": {}, "ball": {}})")), ConfigError);
  EXPECT_THROW(region_from_json(json::parse(R"({"all_of": 3})")), ConfigError);
}

TEST(RunConfigJson, BuiltInNameAndOverrides) {
  const RunConfig c = run_config_from_json(json::parse(R"({
    "benchmark": "pendulum",
    "overrides": {"h_override": 7, "heuristic": false, "delta_max": 0.05,
                  "eta": {"coefficient": 2, "exponent": 1}},
    "output_dir": "x", "jobs": 2})"));
  EXPECT_EQ(c.resolutions, (std::vector<unsigned>{4, 5, 6, 7, 8}));
  const PlannerParams p = c.params_for(5);
  EXPECT_EQ(p.horizon, 7u);
  EXPECT_EQ(p.delta_max, 0.05);
  EXPECT_EQ(p.eta, 10.0);
  EXPECT_FALSE(p.heuristic);
  EXPECT_EQ(c.output_dir, "x");
  EXPECT_EQ(c.jobs, 2u);
}

TEST(RunConfigJson, Errors) {
  EXPECT_THROW(run_config_from_json(json::parse(R"({"benchmark": "nope"})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"benchmark": {"system": {"family": "rocket"}}})")), ConfigError);
  RunConfig c = run_config_from_json(json::parse(R"({"benchmark": "pendulum", "resolutions": [5, 4]})"));
  EXPECT_THROW(c.validate(), ConfigError);
  c.resolutions = {};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), ConfigError);
}

// The shipped config files describe the same problems as the built-in benchmarks.
TEST(ConfigFiles, MatchBuiltInBenchmarks) {
  std::mt19937_64 rng(8);
  for (const auto& name : benchmarks::names()) {
    const auto path = std::filesystem::path(GLC_SOURCE_DIR) / "configs" / (name + ".json");
    const RunConfig c = load_run_config(path.string());
    const BenchmarkConfig built = benchmarks::by_name(name);
    const BenchmarkConfig& file = c.benchmark;
    EXPECT_EQ(file.name, name);
    EXPECT_EQ(file.problem.x_ic, built.problem.x_ic) << name;
    EXPECT_EQ(file.segment_scale, built.segment_scale) << name;
    EXPECT_EQ(file.delta_max, built.delta_max) << name;
    EXPECT_EQ(file.resolution_sweep, built.resolution_sweep) << name;
    EXPECT_EQ(c.resolutions, built.resolution_sweep) << name;
    EXPECT_EQ(file.system().lipschitz_f, built.system().lipschitz_f) << name;
    EXPECT_EQ(file.system().lipschitz_g, built.system().lipschitz_g) << name;
    EXPECT_EQ(file.system().max_speed, built.system().max_speed) << name;
    EXPECT_EQ(static_cast<bool>(file.heuristic), static_cast<bool>(built.heuristic)) << name;
    for (unsigned r : built.resolution_sweep) {
      EXPECT_NEAR(file.eta(r), built.eta(r), 1e-12 * built.eta(r)) << name;
      EXPECT_EQ(file.horizon.ceil_at(r), built.horizon.ceil_at(r)) << name;
    }
    const std::size_t n = built.system().state_dim;
    std::uniform_real_distribution<double> pos(-1.0, 11.0), other(-7.0, 7.0);
    for (int t = 0; t < 20000; ++t) {
      State x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = (name == "acrobot" || name == "pendulum" || i >= 3) ? other(rng) : pos(rng);
      EXPECT_EQ(file.problem.free.contains(x), built.problem.free.contains(x)) << name;
      EXPECT_EQ(file.problem.goal.contains(x), built.problem.goal.contains(x)) << name;
      if (built.heuristic) { EXPECT_DOUBLE_EQ(file.heuristic(x), built.heuristic(x)) << name; }
      const Control u = random_control(built.system().omega, built.system().input_dim, rng);
      EXPECT_EQ(file.system().derivative(x, u), built.system().derivative(x, u)) << name;
      EXPECT_EQ(file.system().g(x, u), built.system().g(x, u)) << name;
    }
  }
}

TEST(ResultsCsv, FormatAndRoundTrip) {
  std::vector<ResultRow> rows(3);
  rows[0] = {4, kInfinity, false, 10, 2, 7, kInfinity, 1.5};
  rows[1] = {5, 19.2, true, 1234, 56, 789, 19.2, 2.5};
  rows[2] = {6, 1.0 / 3.0, true, 99, 0, 12, 1.0 / 3.0, 0.1};
  const std::string text = results_csv(rows);
  EXPECT_EQ(text,
            "R,cost,solved,nodes_expanded,nodes_pruned_glc,labels,best\n"
            "4,inf,false,10,2,7,inf\n"
            "5,19.2,true,1234,56,789,19.2\n"
            "6,0.333333333,true,99,0,12,0.333333333\n");
  const auto parsed = parse_results_csv(text);
  ASSERT_EQ(parsed.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(parsed[i].resolution, rows[i].resolution);
    EXPECT_EQ(parsed[i].solved, rows[i].solved);
    EXPECT_EQ(parsed[i].nodes_expanded, rows[i].nodes_expanded);
    EXPECT_EQ(parsed[i].nodes_pruned_glc, rows[i].nodes_pruned_glc);
    EXPECT_EQ(parsed[i].labels, rows[i].labels);
    EXPECT_EQ(format_real(parsed[i].cost), format_real(rows[i].cost));
    EXPECT_EQ(format_real(parsed[i].best), format_real(rows[i].best));
  }
  EXPECT_EQ(parsed[1].cost, 19.2);
  EXPECT_EQ(results_csv(parsed), text);
  EXPECT_THROW(parse_results_csv("bad\n"), InvalidArgument);
  EXPECT_THROW(parse_results_csv(std::string(kResultsHeader) + "\n1,2,maybe,1,1,1,2\n"), InvalidArgument);
}

TEST(Sweep, RowsOrderedAndDeterministicAcrossJobCounts) {
  RunConfig c = run_config_from_json(json::parse(kTinyConfig));
  const auto one = run_sweep(c);
  c.jobs = 3;
  const auto three = run_sweep(c);
  ASSERT_EQ(one.rows.size(), 4u);
  EXPECT_EQ(results_csv(one.rows), results_csv(three.rows));
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].resolution, c.resolutions[i]);
    EXPECT_TRUE(one.rows[i].solved);
    EXPECT_LE(one.rows[i].best, one.rows[i].cost);
    if (i > 0) { EXPECT_LE(one.rows[i].best, one.rows[i - 1].best); }
  }
}

TEST(Sweep, UnreachableGoalSerializesInf) {
  RunConfig c = run_config_from_json(json::parse(R"({
    "benchmark": {"system": {"family": "single_integrator_2d"}, "x_ic": [0, 0],
                  "goal": {"not": {"everything": true}}, "segment_scale": 2,
                  "eta": {"coefficient": 3}, "horizon": {"coefficient": 3}, "delta_max": 0.1},
    "resolutions": [2],
    "overrides": {"h_override": 3}})"));
  const auto res = run_sweep(c);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].solved);
  EXPECT_EQ(res.rows[0].cost, kInfinity);
  EXPECT_NE(results_csv(res.rows).find("2,inf,false"), std::string::npos);
}

TEST(Sweep, WritesFilesAndTrajectoriesAreConsistent) {
  RunConfig c = run_config_from_json(json::parse(kTinyConfig));
  c.output_dir = scratch_dir("files").string();
  const auto res = run_sweep(c);
  write_outputs(c, res);
  const std::filesystem::path dir(c.output_dir);
  EXPECT_EQ(read_file(dir / "results.csv"), results_csv(res.rows));
  EXPECT_TRUE(std::filesystem::exists(dir / "timing.csv"));
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto path = dir / ("trajectory_" + std::to_string(res.rows[i].resolution) + ".csv");
    ASSERT_TRUE(std::filesystem::exists(path));
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x1,x2,u1,u2");
    std::vector<std::vector<double>> table;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) row.push_back(parse_real(cell));
      ASSERT_EQ(row.size(), 5u);
      table.push_back(row);
    }
    ASSERT_GE(table.size(), 2u);
    const double step = res.outcomes[i].signal->segment_duration /
                        static_cast<double>(euler_step_count(res.outcomes[i].signal->segment_duration, 0.05));
    for (std::size_t k = 1; k < table.size(); ++k) EXPECT_NEAR(table[k][0] - table[k - 1][0], step, 1e-7);
    EXPECT_EQ(table.front()[1], 0.0);
    EXPECT_EQ(table.front()[2], 0.0);
    EXPECT_TRUE(c.benchmark.problem.goal.contains(State{table.back()[1], table.back()[2]}));
    for (const auto& row : table) EXPECT_NEAR(std::hypot(row[3], row[4]), 1.0, 1e-8);
  }
}

TEST(Sweep, RerunIsByteIdentical) {
  RunConfig c = run_config_from_json(json::parse(kTinyConfig));
  c.output_dir = scratch_dir("rerun_a").string();
  write_outputs(c, run_sweep(c));
  const std::string first = read_file(std::filesystem::path(c.output_dir) / "results.csv");
  const std::string traj = read_file(std::filesystem::path(c.output_dir) / "trajectory_5.csv");
  c.output_dir = scratch_dir("rerun_b").string();
  write_outputs(c, run_sweep(c));
  EXPECT_EQ(read_file(std::filesystem::path(c.output_dir) / "results.csv"), first);
  EXPECT_EQ(read_file(std::filesystem::path(c.output_dir) / "trajectory_5.csv"), traj);
}
