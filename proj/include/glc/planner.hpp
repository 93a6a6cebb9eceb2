// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "glc/common.hpp"
#include "glc/dynamics.hpp"
#include "glc/partition.hpp"
#include "glc/region.hpp"
#include "glc/signal_tree.hpp"

namespace glc {

using Heuristic = std::function<double(std::span<const double> x)>;

struct PlannerParams {
  unsigned resolution = 1;
  double segment_scale = 1.0;  // each segment lasts segment_scale / resolution
  double eta = 1.0;            // partition scale, cells have side 1 / eta
  std::uint64_t horizon = 1;   // children at depth >= horizon are discarded
  double delta_max = 0.1;      // Euler step bound
  Heuristic heuristic;         // empty means zero
  // Stop after this many expansions and report no solution. Zero disables.
  std::uint64_t expansion_limit = 0;
  // Record and check search invariants while planning.
  bool check_invariants = false;

  double segment_duration() const { return segment_scale / static_cast<double>(resolution); }

  void validate() const {
    if (resolution == 0) throw InvalidArgument("resolution must be >= 1");
    if (!(segment_scale > 0.0) || !std::isfinite(segment_scale))
      throw InvalidArgument("segment scale must be positive");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
    if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
    if (!(delta_max > 0.0) || !std::isfinite(delta_max))
      throw InvalidArgument("delta_max must be positive");
  }
};

struct Problem {
  SystemModel system;
  State x_ic;
  Region free = Region::everything();
  Region goal;
};

struct PlanStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_enqueued = 0;
  std::uint64_t nodes_pruned_glc = 0;
  std::uint64_t nodes_pruned_infeasible = 0;
  std::uint64_t nodes_pruned_depth = 0;
  std::uint64_t labels_created = 0;
  std::uint64_t labels_replaced = 0;
  std::uint64_t labels = 0;  // cells labelled when the search stopped
  double wall_time = 0.0;    // seconds
};

/// Label at prune time together with the candidate it discarded.
struct PruneEvent {
  NodeId label;
  State candidate_state;
  double candidate_time;
  double candidate_cost;
};

/// Violations of the search invariants observed during an instrumented run.
struct InvariantReport {
  std::uint64_t label_cell_mismatch = 0;      // label stored under a cell it does not occupy
  std::uint64_t label_not_improving = 0;      // replacement did not strictly lower cost
  std::uint64_t duplicate_enqueue = 0;        // node entered the queue twice
  std::uint64_t popped_cost_decrease = 0;     // zero heuristic only
  std::uint64_t unjustified_prune = 0;        // prune without the time and cost conditions
  std::vector<PruneEvent> prunes;

  std::uint64_t total() const {
    return label_cell_mismatch + label_not_improving + duplicate_enqueue + popped_cost_decrease +
           unjustified_prune;
  }
};

struct PlanOutcome {
  double cost = kInfinity;
  std::optional<Signal> signal;
  SampledTrajectory trajectory;
  std::vector<std::size_t> trajectory_segment;  // control index per trajectory sample
  PlanStats stats;
  InvariantReport invariants;
  bool budget_exhausted = false;

  bool solved() const noexcept { return signal.has_value(); }
};

/// Additive cost margin of the pruning rule:
/// (sqrt(n)/eta) * (L_g/L_f) * (exp(L_f * h / R) - 1), with its L_f -> 0 limit.
inline double glc_threshold(const PlannerParams& params, const SystemModel& system) {
  if (!(params.eta > 0.0)) throw InvalidArgument("glc_threshold: eta must be positive");
  if (system.lipschitz_g == 0.0) return 0.0;
  const double radius = cell_radius(system.state_dim, params.eta);
  const double span = static_cast<double>(params.horizon) / static_cast<double>(params.resolution);
  if (system.lipschitz_f == 0.0) return radius * system.lipschitz_g * span;
  return radius * (system.lipschitz_g / system.lipschitz_f) * std::expm1(system.lipschitz_f * span);
}

/// Clearance epsilon(R) = (R sqrt(n) / (L_f eta)) (exp(L_f h / R) - 1) for
/// which the returned cost is bounded by the best epsilon-interior cost.
inline double epsilon_bound(const PlannerParams& params, const SystemModel& system) {
  const double rn = std::sqrt(static_cast<double>(system.state_dim));
  const double h = static_cast<double>(params.horizon);
  const double r = static_cast<double>(params.resolution);
  if (system.lipschitz_f == 0.0) return rn * h / params.eta;
  return r * rn / (system.lipschitz_f * params.eta) * std::expm1(system.lipschitz_f * h / r);
}

/// True when the incumbent label dominates the candidate: no later arrival
/// and a cost advantage of at least `threshold`. Both must share a cell.
inline bool prunes(double incumbent_time, double incumbent_cost, double candidate_time,
                   double candidate_cost, double threshold) {
  return incumbent_time <= candidate_time && incumbent_cost + threshold <= candidate_cost;
}

inline bool prunes(const SignalNode& incumbent, const SignalNode& candidate, double threshold) {
  return prunes(incumbent.terminal_time, incumbent.cost, candidate.terminal_time, candidate.cost,
                threshold);
}

/// True iff every sample from index `first` on lies in the free set.
inline bool check_feasible(const SampledTrajectory& samples, const Region& free, std::size_t first = 0) {
  for (std::size_t k = first; k < samples.size(); ++k)
    if (!free.contains(samples.state(k))) return false;
  return true;
}

namespace detail {

struct QueueEntry {
  double priority;
  std::uint64_t seq;
  NodeId id;
};

struct QueueOrder {
  // std::priority_queue is a max-heap: "less" means popped later.
  bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq > b.seq;
  }
};

}  // namespace detail

/// Best-first search over piecewise-constant signals with label pruning.
///
/// Returns the first popped signal whose terminal state is in the goal, or an
/// infinite cost with no signal once the queue is empty (or the expansion
/// limit is hit). Equal priorities pop in insertion order.
inline PlanOutcome plan(const Problem& problem, const PlannerParams& params) {
  params.validate();
  const SystemModel& sys = problem.system;
  if (problem.x_ic.size() != sys.state_dim) throw InvalidArgument("x_ic has the wrong dimension");
  if (!problem.free.contains(problem.x_ic)) throw InvalidArgument("x_ic is not in the free set");

  const auto t_start = std::chrono::steady_clock::now();
  const auto controls = sample_controls(sys, params.resolution);
  const double threshold = glc_threshold(params, sys);
  const double tau = params.segment_duration();
  const bool zero_heuristic = !params.heuristic;
  const bool check = params.check_invariants;

  PlanOutcome out;
  SignalTree tree(params.segment_scale, params.resolution);
  std::unordered_map<GridKey, NodeId, GridKeyHash> labels;
  std::priority_queue<detail::QueueEntry, std::vector<detail::QueueEntry>, detail::QueueOrder> queue;
  std::unordered_set<NodeId> enqueued;
  std::uint64_t seq = 0;

  auto priority_of = [&](const SignalNode& n) {
    return zero_heuristic ? n.cost : n.cost + params.heuristic(n.terminal_state);
  };
  auto push = [&](NodeId id) {
    if (check && !enqueued.insert(id).second) ++out.invariants.duplicate_enqueue;
    queue.push({priority_of(tree[id]), seq++, id});
    ++out.stats.nodes_enqueued;
  };

  push(tree.create_root(problem.x_ic));

  std::optional<NodeId> found;
  double last_popped = -kInfinity;
  State child_state, replay, scratch;
  GridKey key;
  std::vector<NodeId> survivors;

  while (!queue.empty()) {
    const NodeId uid = queue.top().id;
    queue.pop();
    const SignalNode& u = tree[uid];
    if (check && zero_heuristic) {
      if (u.cost < last_popped) ++out.invariants.popped_cost_decrease;
      last_popped = u.cost;
    }
    if (problem.goal.contains(u.terminal_state)) {
      found = uid;
      break;
    }
    if (params.expansion_limit != 0 && out.stats.nodes_expanded >= params.expansion_limit) {
      out.budget_exhausted = true;
      break;
    }
    ++out.stats.nodes_expanded;

    // Copies: tree storage may reallocate as children are appended.
    const State parent_state = u.terminal_state;
    const std::uint32_t child_depth = u.depth + 1;
    const double parent_cost = u.cost;
    const double child_time = tree.time_at_depth(child_depth);

    survivors.clear();
    for (const Control& w : controls) {
      if (child_depth >= params.horizon) {
        ++out.stats.nodes_pruned_depth;
        continue;
      }
      child_state = parent_state;
      double segment_cost = 0.0;
      euler_segment(sys, child_state, w, tau, params.delta_max, scratch, segment_cost,
                    [](std::size_t, double, std::span<const double>) { return true; });
      const double child_cost = parent_cost + segment_cost;
      // Dominance is tested before collision checking; the child is dropped
      // if either holds, so only the statistics depend on the order.
      grid_key_into(child_state, params.eta, key);
      auto it = labels.find(key);
      if (it != labels.end()) {
        const SignalNode& z = tree[it->second];
        if (prunes(z.terminal_time, z.cost, child_time, child_cost, threshold)) {
          ++out.stats.nodes_pruned_glc;
          if (check) out.invariants.prunes.push_back({z.id, child_state, child_time, child_cost});
          continue;
        }
      }
      // Second, identical pass checks every integration sample.
      replay = parent_state;
      const bool feasible =
          euler_segment(sys, replay, w, tau, params.delta_max, scratch, segment_cost,
                        [&](std::size_t, double, std::span<const double> x) { return problem.free.contains(x); });
      if (!feasible) {
        ++out.stats.nodes_pruned_infeasible;
        continue;
      }
      const NodeId wid = tree.add_child(uid, w, child_state, segment_cost);
      survivors.push_back(wid);
      if (it == labels.end()) {
        labels.emplace(key, wid);
        ++out.stats.labels_created;
      } else if (child_cost < tree[it->second].cost) {
        const double previous = tree[it->second].cost;
        it->second = wid;
        ++out.stats.labels_replaced;
        if (check && !(tree[wid].cost < previous)) ++out.invariants.label_not_improving;
      }
    }
    for (NodeId id : survivors) push(id);
  }

  if (check) {
    for (const auto& [key, id] : labels)
      if (!(grid_key(tree[id].terminal_state, params.eta) == key)) ++out.invariants.label_cell_mismatch;
    for (const auto& ev : out.invariants.prunes) {
      const SignalNode& z = tree[ev.label];
      const bool same_cell = grid_key(z.terminal_state, params.eta) == grid_key(ev.candidate_state, params.eta);
      if (!same_cell || !prunes(z.terminal_time, z.cost, ev.candidate_time, ev.candidate_cost, threshold))
        ++out.invariants.unjustified_prune;
    }
  }

  out.stats.labels = labels.size();
  if (found) {
    out.cost = tree[*found].cost;
    out.signal = tree.reconstruct_signal(*found);
    Rollout r = rollout(sys, problem.x_ic, *out.signal, params.delta_max);
    out.trajectory = std::move(r.samples);
    out.trajectory_segment = std::move(r.segment_of_sample);
  }
  out.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace glc
