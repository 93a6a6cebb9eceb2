// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glc/cli/config.hpp"
#include "glc/planner.hpp"

namespace glc::cli {

struct ResultRow {
  unsigned resolution = 0;
  double cost = kInfinity;
  bool solved = false;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_pruned_glc = 0;
  std::uint64_t labels = 0;
  double best = kInfinity;  // minimum cost over this and all smaller resolutions
  double wall_ms = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<PlanOutcome> outcomes;  // same order as rows
};

/// Prefix minima of the costs.
inline std::vector<double> best_so_far(const std::vector<double>& costs) {
  std::vector<double> out;
  out.reserve(costs.size());
  double best = kInfinity;
  for (double c : costs) {
    if (c < best) best = c;
    out.push_back(best);
  }
  return out;
}

/// Plans every resolution of the config, at most `jobs` at a time. Rows come
/// back ordered by resolution whatever the completion order. The first error
/// raised by any run is rethrown once all workers have stopped.
inline SweepResult run_sweep(const RunConfig& config) {
  config.validate();
  const std::size_t count = config.resolutions.size();
  SweepResult result;
  result.rows.resize(count);
  result.outcomes.resize(count);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        const unsigned r = config.resolutions[i];
        result.outcomes[i] = plan(config.benchmark.problem, config.params_for(r));
        const PlanOutcome& o = result.outcomes[i];
        ResultRow& row = result.rows[i];
        row.resolution = r;
        row.cost = o.cost;
        row.solved = o.solved();
        row.nodes_expanded = o.stats.nodes_expanded;
        row.nodes_pruned_glc = o.stats.nodes_pruned_glc;
        row.labels = o.stats.labels;
        row.wall_ms = o.stats.wall_time * 1e3;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned jobs = static_cast<unsigned>(std::min<std::size_t>(config.jobs, count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> costs;
  for (const auto& row : result.rows) costs.push_back(row.cost);
  const auto best = best_so_far(costs);
  for (std::size_t i = 0; i < count; ++i) result.rows[i].best = best[i];
  return result;
}

/// Nine significant digits, "inf" for infinity.
inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

inline constexpr const char* kResultsHeader = "R,cost,solved,nodes_expanded,nodes_pruned_glc,labels,best";

/// results.csv body. Wall-clock times are kept out so reruns are byte-identical.
inline std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : rows)
    out << r.resolution << ',' << format_real(r.cost) << ',' << (r.solved ? "true" : "false") << ','
        << r.nodes_expanded << ',' << r.nodes_pruned_glc << ',' << r.labels << ',' << format_real(r.best) << '\n';
  return out.str();
}

inline std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw InvalidArgument("results.csv: bad header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw InvalidArgument("results.csv: expected 7 fields in '" + line + "'");
    if (f[2] != "true" && f[2] != "false") throw InvalidArgument("results.csv: bad solved flag");
    ResultRow r;
    r.resolution = static_cast<unsigned>(std::stoul(f[0]));
    r.cost = parse_real(f[1]);
    r.solved = f[2] == "true";
    r.nodes_expanded = std::stoull(f[3]);
    r.nodes_pruned_glc = std::stoull(f[4]);
    r.labels = std::stoull(f[5]);
    r.best = parse_real(f[6]);
    rows.push_back(r);
  }
  return rows;
}

inline std::string timing_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "R,wall_ms\n";
  for (const auto& r : rows) out << r.resolution << ',' << format_real(r.wall_ms) << '\n';
  return out.str();
}

/// One row per integrator sample: t, x1..xn, u1..um. The control column holds
/// the control applied from that sample on; the final sample repeats the last
/// control. An empty signal leaves the control columns blank.
inline std::string trajectory_csv(const PlanOutcome& outcome, std::size_t input_dim) {
  std::ostringstream out;
  const SampledTrajectory& tr = outcome.trajectory;
  out << 't';
  for (std::size_t i = 0; i < tr.dim(); ++i) out << ",x" << (i + 1);
  for (std::size_t i = 0; i < input_dim; ++i) out << ",u" << (i + 1);
  out << '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    out << format_real(tr.time(k));
    for (double v : tr.state(k)) out << ',' << format_real(v);
    const bool has_control = outcome.signal && !outcome.signal->empty();
    for (std::size_t i = 0; i < input_dim; ++i) {
      out << ',';
      if (has_control) out << format_real(outcome.signal->controls[outcome.trajectory_segment[k]][i]);
    }
    out << '\n';
  }
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

/// Writes results.csv, timing.csv and, when requested, trajectory_R.csv for
/// every solved resolution under the config's output directory.
inline void write_outputs(const RunConfig& config, const SweepResult& result) {
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", results_csv(result.rows));
  write_file(dir / "timing.csv", timing_csv(result.rows));
  if (!config.emit_trajectory) return;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (!result.rows[i].solved) continue;
    write_file(dir / ("trajectory_" + std::to_string(result.rows[i].resolution) + ".csv"),
               trajectory_csv(result.outcomes[i], config.benchmark.system().input_dim));
  }
}

}  // namespace glc::cli
