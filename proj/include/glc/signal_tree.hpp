// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "glc/common.hpp"

namespace glc {

using NodeId = std::uint32_t;

/// One vertex of the tree of piecewise-constant control signals.
///
/// A node stands for the signal obtained by following parent links back to
/// the root; only the control of the final segment is stored here. The root
/// is the zero-duration identity signal and carries no control.
struct SignalNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  Control control;
  std::uint32_t depth = 0;
  State terminal_state;
  double terminal_time = 0.0;
  double cost = 0.0;

  bool is_root() const noexcept { return !parent.has_value(); }
};

/// A piecewise-constant signal: controls[i] is applied on
/// [i * segment_duration, (i + 1) * segment_duration).
struct Signal {
  std::vector<Control> controls;
  double segment_duration = 0.0;

  std::size_t size() const noexcept { return controls.size(); }
  bool empty() const noexcept { return controls.empty(); }
  double duration() const noexcept {
    return static_cast<double>(controls.size()) * segment_duration;
  }

  /// Value of the signal at time t; the final segment is closed on the right.
  const Control& at(double t) const {
    if (controls.empty()) throw InvalidArgument("Signal::at on an empty signal");
    auto i = static_cast<std::size_t>(std::floor(t / segment_duration));
    if (i >= controls.size()) i = controls.size() - 1;
    return controls[i];
  }
};

/// Append-only arena holding the search tree of one planning run.
///
/// Every segment lasts segment_scale / resolution seconds. Terminal times are
/// formed as (depth * segment_scale) / resolution so that two nodes at the
/// same depth always report bit-identical times.
class SignalTree {
 public:
  SignalTree(double segment_scale, unsigned resolution)
      : segment_scale_(segment_scale), resolution_(resolution) {
    if (!(segment_scale > 0.0) || resolution == 0)
      throw InvalidArgument("SignalTree needs a positive segment scale and resolution");
  }

  double segment_duration() const noexcept {
    return segment_scale_ / static_cast<double>(resolution_);
  }

  double time_at_depth(std::uint32_t depth) const noexcept {
    return (static_cast<double>(depth) * segment_scale_) / static_cast<double>(resolution_);
  }

  NodeId create_root(State x_ic) {
    SignalNode node;
    node.id = next_id();
    node.terminal_state = std::move(x_ic);
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
  }

  NodeId add_child(NodeId parent, Control control, State terminal_state, double segment_cost) {
    if (parent >= nodes_.size()) throw InvalidArgument("add_child: unknown parent node");
    if (!(segment_cost >= 0.0)) throw InvalidArgument("add_child: segment cost must be >= 0");
    const SignalNode& p = nodes_[parent];
    SignalNode node;
    node.id = next_id();
    node.parent = parent;
    node.control = std::move(control);
    node.depth = p.depth + 1;
    node.terminal_state = std::move(terminal_state);
    node.terminal_time = time_at_depth(node.depth);
    node.cost = p.cost + segment_cost;
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
  }

  const SignalNode& node(NodeId id) const {
    if (id >= nodes_.size()) throw InvalidArgument("unknown node identifier");
    return nodes_[id];
  }

  const SignalNode& operator[](NodeId id) const noexcept { return nodes_[id]; }

  std::size_t size() const noexcept { return nodes_.size(); }

  Signal reconstruct_signal(NodeId id) const {
    const SignalNode* n = &node(id);
    Signal signal;
    signal.segment_duration = segment_duration();
    signal.controls.resize(n->depth);
    for (auto i = n->depth; i > 0; --i) {
      signal.controls[i - 1] = n->control;
      n = &nodes_[*n->parent];
    }
    return signal;
  }

  /// Node identifiers from the root down to id, inclusive.
  std::vector<NodeId> path_to(NodeId id) const {
    std::vector<NodeId> path(node(id).depth + 1);
    NodeId cur = id;
    for (auto i = path.size(); i > 0; --i) {
      path[i - 1] = cur;
      if (nodes_[cur].parent) cur = *nodes_[cur].parent;
    }
    return path;
  }

  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  NodeId next_id() const {
    if (nodes_.size() >= std::numeric_limits<NodeId>::max())
      throw Error("signal tree exhausted the node identifier space");
    return static_cast<NodeId>(nodes_.size());
  }

  double segment_scale_;
  unsigned resolution_;
  std::vector<SignalNode> nodes_;
};

}  // namespace glc
