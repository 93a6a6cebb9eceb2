// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "glc/common.hpp"
#include "glc/signal_tree.hpp"

namespace glc {

/// Axis-aligned box of admissible inputs, lo[i] <= u[i] <= hi[i].
struct IntervalBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Inputs of fixed Euclidean norm, ||u||_2 == radius.
struct Sphere {
  double radius = 1.0;
};

/// Inputs of bounded Euclidean norm, ||u||_2 <= radius.
struct Ball {
  double radius = 1.0;
};

using InputSet = std::variant<IntervalBox, Sphere, Ball>;

inline bool input_set_contains(const InputSet& omega, std::span<const double> u,
                               double tol = 1e-12) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalBox>) {
          if (u.size() != s.lo.size()) return false;
          for (std::size_t i = 0; i < u.size(); ++i)
            if (u[i] < s.lo[i] - tol || u[i] > s.hi[i] + tol) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          double r = 0.0;
          for (double x : u) r += x * x;
          return std::abs(std::sqrt(r) - s.radius) <= tol;
        } else {
          double r = 0.0;
          for (double x : u) r += x * x;
          return std::sqrt(r) <= s.radius + tol;
        }
      },
      omega);
}

using DynamicsFn =
    std::function<void(std::span<const double> x, std::span<const double> u, std::span<double> dx)>;
using RunningCostFn = std::function<double(std::span<const double> x, std::span<const double> u)>;

/// Dynamics, running cost and the regularity constants that size the
/// pruning threshold.
struct SystemModel {
  std::string name;
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  DynamicsFn f;
  RunningCostFn g;
  InputSet omega = Ball{};
  double lipschitz_f = 0.0;  // state Lipschitz constant of f
  double lipschitz_g = 0.0;  // joint (state, input) Lipschitz constant of g
  double max_speed = 0.0;    // bound M on ||f||
  double max_input = 1.0;    // bound u_max on ||u||

  State derivative(std::span<const double> x, std::span<const double> u) const {
    State dx(state_dim);
    f(x, u, dx);
    return dx;
  }
};

/// Uniformly sampled states over [0, duration], stored row-major.
class SampledTrajectory {
 public:
  SampledTrajectory() = default;
  explicit SampledTrajectory(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  double time(std::size_t k) const noexcept { return times_[k]; }
  std::span<const double> state(std::size_t k) const noexcept {
    return {states_.data() + k * dim_, dim_};
  }
  std::span<const double> back() const noexcept { return state(size() - 1); }

  void clear(std::size_t dim) {
    dim_ = dim;
    times_.clear();
    states_.clear();
  }
  void push_back(double t, std::span<const double> x) {
    times_.push_back(t);
    states_.insert(states_.end(), x.begin(), x.end());
  }
  void pop_back() {
    times_.pop_back();
    states_.resize(states_.size() - dim_);
  }
  void reserve(std::size_t n) {
    times_.reserve(n);
    states_.reserve(n * dim_);
  }

  const std::vector<double>& times() const noexcept { return times_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> times_;
  std::vector<double> states_;
};

struct SegmentResult {
  State terminal_state;
  SampledTrajectory samples;  // N + 1 entries, both endpoints included
  double segment_cost = 0.0;
};

inline std::size_t euler_step_count(double tau, double delta_max) {
  return static_cast<std::size_t>(std::ceil(tau / delta_max));
}

/// Explicit Euler propagation of one constant-control segment.
///
/// Uses N = ceil(tau / delta_max) steps of size tau / N. The running cost is
/// integrated with the left-endpoint rule so it stays consistent with the
/// state update. `x` holds x0 on entry and the terminal state on return.
/// `on_sample(k, t, x)` sees every sample after the first (k = 1..N, t
/// relative to the segment start); returning false stops early and makes the
/// function return false.
template <typename OnSample>
bool euler_segment(const SystemModel& system, std::span<double> x, std::span<const double> u,
                   double tau, double delta_max, State& scratch, double& cost, OnSample&& on_sample) {
  if (!(tau > 0.0) || !(delta_max > 0.0))
    throw InvalidArgument("propagate: tau and delta_max must be positive");
  const std::size_t n = system.state_dim;
  const std::size_t steps = euler_step_count(tau, delta_max);
  const double h = tau / static_cast<double>(steps);
  scratch.resize(n);
  cost = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    system.f(x, u, scratch);
    const double rate = system.g(x, u);
    if (!all_finite(scratch) || !std::isfinite(rate))
      throw NumericalError("non-finite derivative or running cost", k);
    cost += h * rate;
    for (std::size_t i = 0; i < n; ++i) x[i] += h * scratch[i];
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(x[i])) throw NumericalError("non-finite state", k + 1);
    if (!on_sample(k + 1, static_cast<double>(k + 1) * h, std::span<const double>(x.data(), n)))
      return false;
  }
  return true;
}

/// Propagates one segment and records all N + 1 samples, times offset by t0.
/// Reuses the buffers already held by `out`.
inline void propagate_into(const SystemModel& system, std::span<const double> x0,
                           std::span<const double> u, double tau, double delta_max,
                           SegmentResult& out, double t0 = 0.0) {
  out.terminal_state.assign(x0.begin(), x0.end());
  out.samples.clear(system.state_dim);
  out.samples.reserve(euler_step_count(tau, delta_max) + 1);
  out.samples.push_back(t0, out.terminal_state);
  State scratch;
  euler_segment(system, out.terminal_state, u, tau, delta_max, scratch, out.segment_cost,
                [&](std::size_t, double t, std::span<const double> x) {
                  out.samples.push_back(t0 + t, x);
                  return true;
                });
}

inline SegmentResult propagate(const SystemModel& system, std::span<const double> x0,
                               std::span<const double> u, double tau, double delta_max) {
  SegmentResult out;
  propagate_into(system, x0, u, tau, delta_max, out);
  return out;
}

/// Full rollout of a piecewise-constant signal, segment by segment, exactly as
/// the planner builds it. Segment boundaries appear once in the samples.
struct Rollout {
  SampledTrajectory samples;
  std::vector<std::size_t> segment_of_sample;  // index into signal.controls
  State terminal_state;
  double cost = 0.0;
};

inline Rollout rollout(const SystemModel& system, std::span<const double> x0, const Signal& signal,
                       double delta_max) {
  Rollout r;
  r.samples.clear(system.state_dim);
  r.terminal_state.assign(x0.begin(), x0.end());
  r.samples.push_back(0.0, r.terminal_state);
  r.segment_of_sample.push_back(0);
  SegmentResult seg;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double t0 = static_cast<double>(i) * signal.segment_duration;
    // The boundary sample shared with the previous segment takes this control.
    r.segment_of_sample.back() = i;
    propagate_into(system, r.terminal_state, signal.controls[i], signal.segment_duration, delta_max,
                   seg, t0);
    for (std::size_t k = 1; k < seg.samples.size(); ++k) {
      r.samples.push_back(seg.samples.time(k), seg.samples.state(k));
      r.segment_of_sample.push_back(i);
    }
    r.cost += seg.segment_cost;
    r.terminal_state = seg.terminal_state;
  }
  return r;
}

namespace detail {

inline std::vector<double> uniform_grid(double lo, double hi, unsigned count) {
  if (count == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(count);
  for (unsigned i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Cube lattice with `per_axis` points on [-r, r]^m culled to the closed ball.
inline std::vector<Control> lattice_in_ball(double radius, std::size_t m, unsigned per_axis) {
  const auto axis = uniform_grid(-radius, radius, per_axis);
  const std::size_t total = ipow(per_axis, m);
  std::vector<Control> out;
  Control u(m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double r2 = 0.0;
    for (std::size_t d = m; d > 0; --d) {
      u[d - 1] = axis[rem % per_axis];
      rem /= per_axis;
      r2 += u[d - 1] * u[d - 1];
    }
    if (std::sqrt(r2) <= radius * (1.0 + 1e-13)) out.push_back(u);
  }
  return out;
}

}  // namespace detail

/// Deterministic finite input set of exactly R^m points.
///
/// Interval boxes use endpoint-inclusive product grids (a single midpoint per
/// axis when R == 1). Circles use R^2 uniformly spaced angles. Balls use the
/// coarsest cube lattice holding at least R^m points inside the ball, thinned
/// to R^m by removing points at a uniform stride.
inline std::vector<Control> sample_controls(const SystemModel& system, unsigned resolution) {
  if (resolution == 0) throw InvalidArgument("sample_controls: resolution must be >= 1");
  const std::size_t m = system.input_dim;
  const std::size_t count = detail::ipow(resolution, m);
  return std::visit(
      [&](const auto& s) -> std::vector<Control> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalBox>) {
          if (s.lo.size() != m || s.hi.size() != m)
            throw InvalidArgument("sample_controls: interval box dimension mismatch");
          std::vector<std::vector<double>> axes;
          for (std::size_t d = 0; d < m; ++d)
            axes.push_back(detail::uniform_grid(s.lo[d], s.hi[d], resolution));
          std::vector<Control> out(count, Control(m));
          for (std::size_t idx = 0; idx < count; ++idx) {
            std::size_t rem = idx;
            for (std::size_t d = m; d > 0; --d) {
              out[idx][d - 1] = axes[d - 1][rem % resolution];
              rem /= resolution;
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          if (m != 2) throw InvalidArgument("sample_controls: sphere inputs supported only for m = 2");
          std::vector<Control> out(count);
          for (std::size_t k = 0; k < count; ++k) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
            out[k] = {s.radius * std::cos(a), s.radius * std::sin(a)};
          }
          return out;
        } else {
          if (count == 1) return {Control(m, 0.0)};
          unsigned per_axis = resolution;
          auto pts = detail::lattice_in_ball(s.radius, m, per_axis);
          while (pts.size() < count) pts = detail::lattice_in_ball(s.radius, m, ++per_axis);
          const std::size_t surplus = pts.size() - count;
          if (surplus == 0) return pts;
          std::vector<Control> out;
          out.reserve(count);
          // Drop `surplus` points spread evenly through the lattice order.
          std::size_t dropped = 0;
          for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::size_t due = ((i + 1) * surplus) / pts.size();
            if (due > dropped) {
              ++dropped;
              continue;
            }
            out.push_back(pts[i]);
          }
          return out;
        }
      },
      system.omega);
}

}  // namespace glc
