// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "glc/common.hpp"

namespace glc {

/// Open subset of R^n built from boxes, balls and halfspaces by
/// intersection, union and complement.
///
/// Primitives are open, so `contains` evaluates strict inequalities. The
/// complement of a set is taken as the interior of its complement (points
/// strictly outside), which keeps every composed region open.
///
/// `clearance` is a signed distance: positive values are a lower bound on
/// the distance from x to the complement of the region, and exact for single
/// primitives, their complements and intersections of those.
class Region {
 public:
  struct Node {
    virtual ~Node() = default;
    virtual bool test(std::span<const double> x, bool inside) const = 0;
    virtual double signed_distance(std::span<const double> x) const = 0;
  };

  Region() : node_(std::make_shared<Everything>()) {}
  explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  bool contains(std::span<const double> x) const { return node_->test(x, true); }
  bool strictly_outside(std::span<const double> x) const { return node_->test(x, false); }
  double clearance(std::span<const double> x) const { return node_->signed_distance(x); }
  bool contains_with_clearance(std::span<const double> x, double eps) const {
    return eps > 0.0 ? clearance(x) >= eps : contains(x);
  }

  static Region everything() { return Region(std::make_shared<Everything>()); }

  /// Open box lo < x[dims] < hi. Empty dims means the leading coordinates.
  static Region box(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> dims = {}) {
    if (lo.size() != hi.size()) throw InvalidArgument("box: lo/hi size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw InvalidArgument("box: lo must be below hi");
    dims = default_dims(std::move(dims), lo.size());
    return Region(std::make_shared<Box>(std::move(lo), std::move(hi), std::move(dims)));
  }

  /// Open ball ||x[dims] - center|| < radius.
  static Region ball(std::vector<double> center, double radius, std::vector<std::size_t> dims = {}) {
    if (!(radius >= 0.0)) throw InvalidArgument("ball: radius must be nonnegative");
    dims = default_dims(std::move(dims), center.size());
    return Region(std::make_shared<BallNode>(std::move(center), radius, std::move(dims)));
  }

  /// Open halfspace normal . x[dims] < offset.
  static Region halfspace(std::vector<double> normal, double offset, std::vector<std::size_t> dims = {}) {
    if (!(norm2(normal) > 0.0)) throw InvalidArgument("halfspace: normal must be nonzero");
    dims = default_dims(std::move(dims), normal.size());
    return Region(std::make_shared<Halfspace>(std::move(normal), offset, std::move(dims)));
  }

  friend Region operator!(const Region& r) { return Region(std::make_shared<Not>(r.node_)); }
  friend Region operator&(const Region& a, const Region& b) { return all_of({a, b}); }
  friend Region operator|(const Region& a, const Region& b) { return any_of({a, b}); }

  static Region all_of(const std::vector<Region>& parts) {
    return Region(std::make_shared<Combine>(nodes(parts), true));
  }
  static Region any_of(const std::vector<Region>& parts) {
    return Region(std::make_shared<Combine>(nodes(parts), false));
  }

 private:
  using NodePtr = std::shared_ptr<const Node>;

  static std::vector<std::size_t> default_dims(std::vector<std::size_t> dims, std::size_t n) {
    if (dims.empty()) {
      dims.resize(n);
      std::iota(dims.begin(), dims.end(), std::size_t{0});
    }
    if (dims.size() != n) throw InvalidArgument("region: dims size mismatch");
    return dims;
  }

  static std::vector<NodePtr> nodes(const std::vector<Region>& parts) {
    std::vector<NodePtr> out;
    for (const auto& p : parts) out.push_back(p.node_);
    return out;
  }

  struct Everything final : Node {
    bool test(std::span<const double>, bool inside) const override { return inside; }
    double signed_distance(std::span<const double>) const override { return kInfinity; }
  };

  struct Box final : Node {
    Box(std::vector<double> l, std::vector<double> h, std::vector<std::size_t> d)
        : lo(std::move(l)), hi(std::move(h)), dims(std::move(d)) {}
    bool test(std::span<const double> x, bool inside) const override {
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const double v = x[dims[i]];
        const bool in = lo[i] < v && v < hi[i];
        const bool out = v < lo[i] || v > hi[i];
        if (inside && !in) return false;
        if (!inside && out) return true;
      }
      return inside;
    }
    double signed_distance(std::span<const double> x) const override {
      double depth = kInfinity;
      double excess2 = 0.0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const double v = x[dims[i]];
        depth = std::min({depth, v - lo[i], hi[i] - v});
        const double e = std::max({lo[i] - v, v - hi[i], 0.0});
        excess2 += e * e;
      }
      return excess2 > 0.0 ? -std::sqrt(excess2) : depth;
    }
    std::vector<double> lo, hi;
    std::vector<std::size_t> dims;
  };

  struct BallNode final : Node {
    BallNode(std::vector<double> c, double r, std::vector<std::size_t> d)
        : center(std::move(c)), radius(r), dims(std::move(d)) {}
    double dist2(std::span<const double> x) const {
      double s = 0.0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const double d = x[dims[i]] - center[i];
        s += d * d;
      }
      return s;
    }
    bool test(std::span<const double> x, bool inside) const override {
      const double d2 = dist2(x);
      return inside ? d2 < radius * radius : d2 > radius * radius;
    }
    double signed_distance(std::span<const double> x) const override {
      return radius - std::sqrt(dist2(x));
    }
    std::vector<double> center;
    double radius;
    std::vector<std::size_t> dims;
  };

  struct Halfspace final : Node {
    Halfspace(std::vector<double> a, double b, std::vector<std::size_t> d)
        : normal(std::move(a)), offset(b), dims(std::move(d)), scale(norm2(normal)) {}
    double dot(std::span<const double> x) const {
      double s = 0.0;
      for (std::size_t i = 0; i < dims.size(); ++i) s += normal[i] * x[dims[i]];
      return s;
    }
    bool test(std::span<const double> x, bool inside) const override {
      const double v = dot(x);
      return inside ? v < offset : v > offset;
    }
    double signed_distance(std::span<const double> x) const override {
      return (offset - dot(x)) / scale;
    }
    std::vector<double> normal;
    double offset;
    std::vector<std::size_t> dims;
    double scale;
  };

  struct Not final : Node {
    explicit Not(NodePtr c) : child(std::move(c)) {}
    bool test(std::span<const double> x, bool inside) const override { return child->test(x, !inside); }
    double signed_distance(std::span<const double> x) const override { return -child->signed_distance(x); }
    NodePtr child;
  };

  struct Combine final : Node {
    Combine(std::vector<NodePtr> c, bool intersect) : children(std::move(c)), intersection(intersect) {}
    bool test(std::span<const double> x, bool inside) const override {
      // inside an intersection / outside a union: every child must agree
      const bool need_all = (intersection == inside);
      for (const auto& c : children) {
        const bool r = c->test(x, inside);
        if (need_all && !r) return false;
        if (!need_all && r) return true;
      }
      return need_all;
    }
    double signed_distance(std::span<const double> x) const override {
      double v = intersection ? kInfinity : -kInfinity;
      for (const auto& c : children) {
        const double d = c->signed_distance(x);
        v = intersection ? std::min(v, d) : std::max(v, d);
      }
      return v;
    }
    std::vector<NodePtr> children;
    bool intersection;
  };

  NodePtr node_;
};

}  // namespace glc
