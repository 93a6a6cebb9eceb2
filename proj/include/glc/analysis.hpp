// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "glc/common.hpp"
#include "glc/dynamics.hpp"
#include "glc/planner.hpp"
#include "glc/signal_tree.hpp"

namespace glc {

struct OracleResult {
  double best_cost = kInfinity;
  std::optional<Signal> best_signal;
  std::uint64_t signals_enumerated = 0;
  double clearance = 0.0;
};

struct OracleOptions {
  unsigned resolution = 1;
  double segment_scale = 1.0;
  std::uint64_t depth_limit = 1;  // signals have depth < depth_limit, as with the planner horizon
  double clearance = 0.0;
  double delta_max = 0.1;
  std::uint64_t budget = 10'000'000;  // bound on |Omega_R|^depth_limit
};

namespace detail {

struct OracleSearch {
  const Problem& problem;
  const OracleOptions& opt;
  const std::vector<Control>& controls;
  double tau;
  OracleResult result;
  std::vector<std::size_t> path;
  State scratch;

  bool free_at(std::span<const double> x) const {
    return problem.free.contains_with_clearance(x, opt.clearance);
  }

  void visit(const State& x, double cost, std::uint64_t depth) {
    ++result.signals_enumerated;
    if (problem.goal.contains_with_clearance(x, opt.clearance) && cost < result.best_cost) {
      result.best_cost = cost;
      Signal s;
      s.segment_duration = tau;
      for (std::size_t i : path) s.controls.push_back(controls[i]);
      result.best_signal = std::move(s);
    }
    if (depth + 1 >= opt.depth_limit) return;
    State child;
    for (std::size_t i = 0; i < controls.size(); ++i) {
      child = x;
      double segment_cost = 0.0;
      const bool ok = euler_segment(problem.system, child, controls[i], tau, opt.delta_max, scratch, segment_cost,
                                    [&](std::size_t, double, std::span<const double> y) { return free_at(y); });
      // Extensions of an infeasible signal are infeasible too.
      if (!ok) continue;
      path.push_back(i);
      visit(child, cost + segment_cost, depth + 1);
      path.pop_back();
    }
  }
};

}  // namespace detail

/// Brute-force minimum cost over every signal of depth below `depth_limit`
/// built from the R^m sampled controls. With clearance eps > 0 every sample
/// must stay eps inside the free set and the terminal state eps inside the
/// goal. Shares the integrator with the planner but none of its pruning.
inline OracleResult exhaustive_best(const Problem& problem, const OracleOptions& opt) {
  if (opt.depth_limit < 1) throw InvalidArgument("exhaustive_best: depth_limit must be >= 1");
  if (!(opt.clearance >= 0.0)) throw InvalidArgument("exhaustive_best: clearance must be >= 0");
  const auto controls = sample_controls(problem.system, opt.resolution);
  double total = std::pow(static_cast<double>(controls.size()), static_cast<double>(opt.depth_limit));
  if (total > static_cast<double>(opt.budget))
    throw InvalidArgument("exhaustive_best: enumeration exceeds the budget, reduce R or depth");

  detail::OracleSearch search{problem, opt, controls, opt.segment_scale / static_cast<double>(opt.resolution), {}, {}, {}};
  search.result.clearance = opt.clearance;
  if (search.free_at(problem.x_ic)) search.visit(problem.x_ic, 0.0, 0);
  return search.result;
}

/// Integral of ||u1 - u2|| over the common domain plus u_max |tau1 - tau2|.
inline double signal_distance(const Signal& a, const Signal& b, double u_max) {
  const double ta = a.duration(), tb = b.duration();
  const double common = std::min(ta, tb);
  double integral = 0.0;
  double t = 0.0;
  std::size_t i = 0, j = 0;
  while (t < common && i < a.size() && j < b.size()) {
    const double end = std::min({static_cast<double>(i + 1) * a.segment_duration,
                                 static_cast<double>(j + 1) * b.segment_duration, common});
    if (end > t) integral += (end - t) * distance2(a.controls[i], b.controls[j]);
    t = end;
    if (t >= static_cast<double>(i + 1) * a.segment_duration) ++i;
    if (t >= static_cast<double>(j + 1) * b.segment_duration) ++j;
  }
  return integral + u_max * std::abs(ta - tb);
}

/// Largest state gap over the shared sample grid plus M |tau1 - tau2|.
inline double trajectory_distance(const SampledTrajectory& a, const SampledTrajectory& b, double max_speed) {
  if (a.empty() || b.empty()) throw InvalidArgument("trajectory_distance: empty trajectory");
  if (a.dim() != b.dim()) throw InvalidArgument("trajectory_distance: dimension mismatch");
  const std::size_t n = std::min(a.size(), b.size());
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::max({1.0, std::abs(a.time(k)), std::abs(b.time(k))});
    if (std::abs(a.time(k) - b.time(k)) > 1e-9 * scale)
      throw InvalidArgument("trajectory_distance: sample grids differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double d = a.state(k)[i] - b.state(k)[i];
      s += d * d;
    }
    gap = std::max(gap, std::sqrt(s));
  }
  const double ta = a.time(a.size() - 1), tb = b.time(b.size() - 1);
  return gap + max_speed * std::abs(ta - tb);
}

struct SensitivityCheck {
  double lhs_state = 0.0;
  double bound_state = 0.0;
  double lhs_cost = 0.0;
  double bound_cost = 0.0;
};

/// Rolls `u` out from x0 and z0 and compares the gaps with the Lipschitz
/// bounds ||x0 - z0|| e^{L_f tau} and ||x0 - z0|| (L_g / L_f)(e^{L_f tau} - 1).
inline SensitivityCheck check_ic_sensitivity(const SystemModel& system, const Signal& u, const State& x0,
                                             const State& z0, double delta_max) {
  const Rollout a = rollout(system, x0, u, delta_max);
  const Rollout b = rollout(system, z0, u, delta_max);
  SensitivityCheck out;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < system.state_dim; ++i) {
      const double d = a.samples.state(k)[i] - b.samples.state(k)[i];
      s += d * d;
    }
    out.lhs_state = std::max(out.lhs_state, std::sqrt(s));
  }
  out.lhs_cost = std::abs(a.cost - b.cost);
  const double gap = distance2(x0, z0);
  const double tau = u.duration();
  const double lf = system.lipschitz_f, lg = system.lipschitz_g;
  out.bound_state = gap * std::exp(lf * tau);
  out.bound_cost = lf == 0.0 ? lg * tau * gap : gap * (lg / lf) * std::expm1(lf * tau);
  return out;
}

struct StateBox {
  State lo;
  State hi;
};

struct LipschitzEstimate {
  double lipschitz_f = 0.0;
  double lipschitz_g = 0.0;
  double max_speed = 0.0;
};

/// Uniform random element of the input set.
inline Control random_control(const InputSet& omega, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Control u(m);
  if (const auto* box = std::get_if<IntervalBox>(&omega)) {
    for (std::size_t i = 0; i < m; ++i)
      u[i] = std::uniform_real_distribution<double>(box->lo[i], box->hi[i])(rng);
    return u;
  }
  const bool sphere = std::holds_alternative<Sphere>(omega);
  const double radius = sphere ? std::get<Sphere>(omega).radius : std::get<Ball>(omega).radius;
  for (;;) {
    for (double& v : u) v = unit(rng);
    const double r = norm2(u);
    if (r > 1.0 || r < 1e-9) continue;
    const double scale = sphere ? radius / r : radius;
    for (double& v : u) v *= scale;
    return u;
  }
}

/// Finite-difference estimates of L_f, L_g (jointly in state and input) and
/// the speed bound M from random points of `region` and random inputs.
inline LipschitzEstimate estimate_lipschitz(const SystemModel& system, std::size_t num_samples,
                                            const StateBox& region, std::uint64_t seed = 1) {
  const std::size_t n = system.state_dim, m = system.input_dim;
  if (region.lo.size() != n || region.hi.size() != n)
    throw InvalidArgument("estimate_lipschitz: region dimension mismatch");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr double kStep = 1e-6;
  LipschitzEstimate est;
  State x(n), y(n), fx(n), fy(n);
  Control v(m);
  for (std::size_t s = 0; s < num_samples; ++s) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::uniform_real_distribution<double>(region.lo[i], region.hi[i])(rng);
    const Control u = random_control(system.omega, m, rng);
    system.f(x, u, fx);
    est.max_speed = std::max(est.max_speed, norm2(fx));

    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = kStep * unit(rng);
      y[i] = x[i] + d;
      d2 += d * d;
    }
    if (d2 == 0.0) continue;
    system.f(y, u, fy);
    est.lipschitz_f = std::max(est.lipschitz_f, distance2(fx, fy) / std::sqrt(d2));

    double e2 = d2;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = kStep * unit(rng);
      v[i] = u[i] + d;
      e2 += d * d;
    }
    est.lipschitz_g = std::max(est.lipschitz_g, std::abs(system.g(x, u) - system.g(y, v)) / std::sqrt(e2));
  }
  return est;
}

}  // namespace glc
