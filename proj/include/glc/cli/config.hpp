// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glc/domains.hpp"

namespace glc::cli {

/// Malformed or inconsistent run configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Overrides {
  std::optional<double> segment_scale;
  std::optional<ScalingLaw> eta;
  std::optional<ScalingLaw> horizon;
  std::optional<double> delta_max;
  bool use_heuristic = true;
  std::optional<std::uint64_t> h_override;
  std::uint64_t expansion_limit = 0;
};

struct RunConfig {
  BenchmarkConfig benchmark;
  std::vector<unsigned> resolutions;
  Overrides overrides;
  std::string output_dir = ".";
  bool emit_trajectory = false;
  unsigned jobs = 1;

  PlannerParams params_for(unsigned resolution) const {
    BenchmarkConfig b = benchmark;
    if (overrides.segment_scale) b.segment_scale = *overrides.segment_scale;
    if (overrides.eta) b.eta = *overrides.eta;
    if (overrides.horizon) b.horizon = *overrides.horizon;
    if (overrides.delta_max) b.delta_max = *overrides.delta_max;
    PlannerParams p = b.params_for(resolution, overrides.use_heuristic);
    if (overrides.h_override) p.horizon = *overrides.h_override;
    p.expansion_limit = overrides.expansion_limit;
    return p;
  }

  void validate() const {
    if (resolutions.empty()) throw ConfigError("resolutions must not be empty");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
      if (resolutions[i] == 0) throw ConfigError("resolutions must be positive");
      if (i > 0 && resolutions[i] <= resolutions[i - 1])
        throw ConfigError("resolutions must be strictly increasing");
    }
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    if (overrides.h_override && *overrides.h_override == 0) throw ConfigError("h_override must be >= 1");
  }
};

using nlohmann::json;

namespace detail {

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

inline std::vector<std::size_t> dims_of(const json& j) {
  return get_or<std::vector<std::size_t>>(j, "dims", {});
}

}  // namespace detail

/// Region from its JSON form. A region is an object with exactly one key:
///   {"everything": true}
///   {"box": {"lo": [..], "hi": [..], "dims": [..]}}
///   {"ball": {"center": [..], "radius": r, "dims": [..]}}
///   {"halfspace": {"normal": [..], "offset": b, "dims": [..]}}
///   {"not": region}, {"all_of": [regions]}, {"any_of": [regions]}
inline Region region_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw ConfigError("a region must be an object with one key");
  const auto& [kind, body] = *j.items().begin();
  try {
    if (kind == "everything") return Region::everything();
    if (kind == "box")
      return Region::box(detail::get<std::vector<double>>(body, "lo"), detail::get<std::vector<double>>(body, "hi"),
                         detail::dims_of(body));
    if (kind == "ball")
      return Region::ball(detail::get<std::vector<double>>(body, "center"), detail::get<double>(body, "radius"),
                          detail::dims_of(body));
    if (kind == "halfspace")
      return Region::halfspace(detail::get<std::vector<double>>(body, "normal"), detail::get<double>(body, "offset"),
                               detail::dims_of(body));
    if (kind == "not") return !region_from_json(body);
    if (kind == "all_of" || kind == "any_of") {
      if (!body.is_array()) throw ConfigError(kind + " expects an array");
      std::vector<Region> parts;
      for (const auto& part : body) parts.push_back(region_from_json(part));
      return kind == "all_of" ? Region::all_of(parts) : Region::any_of(parts);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid region: ") + e.what());
  }
  throw ConfigError("unknown region kind '" + kind + "'");
}

/// {"coefficient": a, "exponent": b, "log_power": k} for a R^b (ln R)^k.
inline ScalingLaw scaling_from_json(const json& j) {
  ScalingLaw law;
  law.coefficient = detail::get<double>(j, "coefficient");
  law.exponent = detail::get_or<double>(j, "exponent", 0.0);
  law.log_power = detail::get_or<int>(j, "log_power", 0);
  if (!(law.coefficient > 0.0)) throw ConfigError("scaling coefficient must be positive");
  return law;
}

inline SystemModel system_from_json(const json& j) {
  const auto family = detail::get<std::string>(j, "family");
  if (family == "single_integrator_2d") return systems::single_integrator_2d();
  if (family == "pendulum") return systems::pendulum();
  if (family == "point_robot_3d") return systems::point_robot_3d();
  if (family == "wheeled_robot") {
    const auto cost = detail::get_or<std::string>(j, "cost", "quadratic_turn");
    if (cost != "quadratic_turn" && cost != "min_time") throw ConfigError("wheeled_robot cost must be quadratic_turn or min_time");
    return systems::wheeled_robot(cost == "quadratic_turn");
  }
  if (family == "acrobot") {
    systems::AcrobotParameters p;
    if (j.contains("parameters")) {
      const auto& q = j.at("parameters");
      p.m1 = detail::get_or(q, "m1", p.m1);
      p.m2 = detail::get_or(q, "m2", p.m2);
      p.l1 = detail::get_or(q, "l1", p.l1);
      p.l2 = detail::get_or(q, "l2", p.l2);
      p.lc1 = detail::get_or(q, "lc1", p.lc1);
      p.lc2 = detail::get_or(q, "lc2", p.lc2);
      p.i1 = detail::get_or(q, "i1", p.i1);
      p.i2 = detail::get_or(q, "i2", p.i2);
      p.gravity = detail::get_or(q, "gravity", p.gravity);
    }
    return systems::acrobot(p);
  }
  throw ConfigError("unknown system family '" + family + "'");
}

/// Remaining distance to a ball over a speed bound, on selected coordinates.
inline Heuristic heuristic_from_json(const json& j) {
  const auto type = detail::get<std::string>(j, "type");
  if (type != "distance_over_speed") throw ConfigError("unknown heuristic type '" + type + "'");
  auto center = detail::get<std::vector<double>>(j, "center");
  const double radius = detail::get_or(j, "radius", 0.0);
  const double speed = detail::get<double>(j, "speed");
  auto dims = detail::dims_of(j);
  if (dims.empty())
    for (std::size_t i = 0; i < center.size(); ++i) dims.push_back(i);
  if (dims.size() != center.size()) throw ConfigError("heuristic dims size mismatch");
  if (!(speed > 0.0)) throw ConfigError("heuristic speed must be positive");
  return [center, radius, speed, dims](std::span<const double> x) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < dims.size(); ++i) d2 += (x[dims[i]] - center[i]) * (x[dims[i]] - center[i]);
    return std::max(0.0, std::sqrt(d2) - radius) / speed;
  };
}

/// Inline benchmark: {"name", "system", "x_ic", "free", "goal", "segment_scale",
/// "eta", "horizon", "delta_max", optional "heuristic", "resolutions"}.
inline BenchmarkConfig benchmark_from_json(const json& j) {
  BenchmarkConfig b;
  b.name = detail::get_or<std::string>(j, "name", "custom");
  b.problem.system = system_from_json(detail::get<json>(j, "system"));
  b.problem.x_ic = detail::get<std::vector<double>>(j, "x_ic");
  if (b.problem.x_ic.size() != b.problem.system.state_dim) throw ConfigError("x_ic has the wrong dimension");
  b.problem.free = j.contains("free") ? region_from_json(j.at("free")) : Region::everything();
  b.problem.goal = region_from_json(detail::get<json>(j, "goal"));
  b.segment_scale = detail::get<double>(j, "segment_scale");
  b.eta = scaling_from_json(detail::get<json>(j, "eta"));
  b.horizon = scaling_from_json(detail::get<json>(j, "horizon"));
  b.delta_max = detail::get<double>(j, "delta_max");
  if (j.contains("heuristic") && !j.at("heuristic").is_null()) b.heuristic = heuristic_from_json(j.at("heuristic"));
  b.resolution_sweep = detail::get_or<std::vector<unsigned>>(j, "resolutions", {});
  return b;
}

/// Run configuration. "benchmark" is either a built-in name or an inline
/// benchmark object. "resolutions" defaults to the benchmark's sweep.
inline RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  const json& b = detail::get<json>(j, "benchmark");
  try {
    c.benchmark = b.is_string() ? benchmarks::by_name(b.get<std::string>()) : benchmark_from_json(b);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  c.resolutions = detail::get_or<std::vector<unsigned>>(j, "resolutions", c.benchmark.resolution_sweep);
  if (j.contains("overrides")) {
    const json& o = j.at("overrides");
    if (o.contains("segment_scale")) c.overrides.segment_scale = detail::get<double>(o, "segment_scale");
    if (o.contains("eta")) c.overrides.eta = scaling_from_json(o.at("eta"));
    if (o.contains("horizon")) c.overrides.horizon = scaling_from_json(o.at("horizon"));
    if (o.contains("delta_max")) c.overrides.delta_max = detail::get<double>(o, "delta_max");
    c.overrides.use_heuristic = detail::get_or(o, "heuristic", true);
    if (o.contains("h_override")) c.overrides.h_override = detail::get<std::uint64_t>(o, "h_override");
    c.overrides.expansion_limit = detail::get_or<std::uint64_t>(o, "expansion_limit", 0);
  }
  c.output_dir = detail::get_or<std::string>(j, "output_dir", ".");
  c.emit_trajectory = detail::get_or(j, "emit_trajectory", false);
  c.jobs = detail::get_or(j, "jobs", 1u);
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace glc::cli
