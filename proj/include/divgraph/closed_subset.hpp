#ifndef DIVGRAPH_CLOSED_SUBSET_HPP
#define DIVGRAPH_CLOSED_SUBSET_HPP

// Finite unions of closed intervals and points of a metric graph.
//
// Stored per internal edge as sorted, pairwise disjoint closed intervals in
// edge offsets. A vertex belongs to the subset iff every incident edge carries
// an interval touching that end; canonicalize() enforces this.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"

namespace divgraph {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

class ClosedSubset {
 public:
  ClosedSubset() = default;

  static ClosedSubset empty(const MetricGraph& g) {
    ClosedSubset s;
    s.graph_ = g;
    s.edges_.assign(static_cast<std::size_t>(g.edge_count()), {});
    return s;
  }

  static ClosedSubset whole(const MetricGraph& g) {
    ClosedSubset s = empty(g);
    for (int e = 0; e < g.edge_count(); ++e) s.edges_[static_cast<std::size_t>(e)].push_back({0.0, g.edge(e).length});
    return s;
  }

  /// Builds a subset from raw per-edge intervals (any order, may overlap).
  static ClosedSubset from_intervals(const MetricGraph& g, std::vector<std::vector<Interval>> per_edge) {
    if (per_edge.size() != static_cast<std::size_t>(g.edge_count()))
      throw InvalidRange("interval list does not match the edge count");
    ClosedSubset s;
    s.graph_ = g;
    s.edges_ = std::move(per_edge);
    s.canonicalize();
    return s;
  }

  static ClosedSubset interval(const MetricGraph& g, int e, double lo, double hi) {
    if (lo > hi) throw InvalidRange("interval lower bound exceeds upper bound");
    ClosedSubset s = empty(g);
    s.edges_.at(static_cast<std::size_t>(e)).push_back({lo, hi});
    s.canonicalize();
    return s;
  }

  static ClosedSubset point(const MetricGraph& g, const PointOnGraph& p) {
    g.validate(p);
    ClosedSubset s = empty(g);
    if (p.is_vertex()) {
      s.add_vertex(p.vertex);
    } else {
      s.edges_[static_cast<std::size_t>(p.edge)].push_back({p.offset, p.offset});
    }
    s.canonicalize();
    return s;
  }

  const MetricGraph& graph() const { return graph_; }
  const std::vector<Interval>& intervals(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

  bool is_empty() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const auto& v) { return v.empty(); });
  }

  bool contains_vertex(int v) const {
    const auto& inc = graph_.incident(v);
    if (inc.empty()) return false;
    const auto& first = inc.front();
    const auto& iv = edges_[static_cast<std::size_t>(first.edge)];
    if (iv.empty()) return false;
    return first.at_start ? iv.front().lo <= 0.0 : iv.back().hi >= graph_.edge(first.edge).length;
  }

  bool contains(const PointOnGraph& p) const {
    graph_.validate(p);
    if (p.is_vertex()) return contains_vertex(p.vertex);
    const double tol = graph_.tol_len();
    for (const auto& iv : edges_[static_cast<std::size_t>(p.edge)])
      if (p.offset >= iv.lo - tol && p.offset <= iv.hi + tol) return true;
    return false;
  }

  /// Total length of the subset.
  double measure() const {
    double m = 0.0;
    for (const auto& v : edges_)
      for (const auto& iv : v) m += iv.hi - iv.lo;
    return m;
  }

 private:
  friend ClosedSubset subset_intersect(const ClosedSubset&, const ClosedSubset&);
  friend ClosedSubset subset_union(const ClosedSubset&, const ClosedSubset&);
  friend ClosedSubset subset_expand(const ClosedSubset&, double);

  void add_vertex(int v) {
    for (const auto& inc : graph_.incident(v)) {
      const double x = inc.at_start ? 0.0 : graph_.edge(inc.edge).length;
      edges_[static_cast<std::size_t>(inc.edge)].push_back({x, x});
    }
  }

  // Clamp, snap to edge ends, sort and merge per edge; then make vertex
  // membership consistent across incident edges.
  void canonicalize() {
    const double tol = graph_.tol_len();
    auto merge_edge = [&](std::size_t e) {
      auto& v = edges_[e];
      const double len = graph_.edge(static_cast<int>(e)).length;
      for (auto& iv : v) {
        iv.lo = std::clamp(iv.lo, 0.0, len);
        iv.hi = std::clamp(iv.hi, 0.0, len);
        if (iv.lo <= tol) iv.lo = 0.0;
        if (iv.hi >= len - tol) iv.hi = len;
        if (iv.hi < iv.lo) iv.hi = iv.lo;
      }
      std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
      std::vector<Interval> out;
      for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + tol) {
          out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
          out.push_back(iv);
        }
      }
      v = std::move(out);
    };
    for (std::size_t e = 0; e < edges_.size(); ++e) merge_edge(e);

    std::vector<char> in(static_cast<std::size_t>(graph_.vertex_count()), 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& v = edges_[e];
      if (v.empty()) continue;
      const auto& ed = graph_.edge(static_cast<int>(e));
      if (v.front().lo <= 0.0) in[static_cast<std::size_t>(ed.u)] = 1;
      if (v.back().hi >= ed.length) in[static_cast<std::size_t>(ed.v)] = 1;
    }
    bool changed = false;
    for (int vtx = 0; vtx < graph_.vertex_count(); ++vtx) {
      if (!in[static_cast<std::size_t>(vtx)]) continue;
      for (const auto& inc : graph_.incident(vtx)) {
        auto& v = edges_[static_cast<std::size_t>(inc.edge)];
        const double len = graph_.edge(inc.edge).length;
        const bool touches = inc.at_start ? (!v.empty() && v.front().lo <= 0.0) : (!v.empty() && v.back().hi >= len);
        if (!touches) {
          v.push_back(inc.at_start ? Interval{0.0, 0.0} : Interval{len, len});
          changed = true;
        }
      }
    }
    if (changed)
      for (std::size_t e = 0; e < edges_.size(); ++e) merge_edge(e);
  }

  MetricGraph graph_;
  std::vector<std::vector<Interval>> edges_;
};

inline ClosedSubset subset_intersect(const ClosedSubset& a, const ClosedSubset& b) {
  a.graph().require_same(b.graph());
  const MetricGraph& g = a.graph();
  const double tol = g.tol_len();
  std::vector<std::vector<Interval>> out(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& x = a.intervals(e);
    const auto& y = b.intervals(e);
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      const double lo = std::max(x[i].lo, y[j].lo);
      const double hi = std::min(x[i].hi, y[j].hi);
      if (lo <= hi + tol) out[static_cast<std::size_t>(e)].push_back({std::min(lo, hi), std::max(lo, hi)});
      if (x[i].hi < y[j].hi) ++i; else ++j;
    }
  }
  return ClosedSubset::from_intervals(g, std::move(out));
}

inline ClosedSubset subset_union(const ClosedSubset& a, const ClosedSubset& b) {
  a.graph().require_same(b.graph());
  const MetricGraph& g = a.graph();
  std::vector<std::vector<Interval>> out(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    auto& v = out[static_cast<std::size_t>(e)];
    v = a.intervals(e);
    v.insert(v.end(), b.intervals(e).begin(), b.intervals(e).end());
  }
  return ClosedSubset::from_intervals(g, std::move(out));
}

/// True iff the subset is all of the graph, up to the length tolerance.
inline bool subset_covers_gamma(const ClosedSubset& a) {
  const MetricGraph& g = a.graph();
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& v = a.intervals(e);
    if (v.size() != 1 || v.front().lo > 0.0 || v.front().hi < g.edge(e).length) return false;
  }
  return true;
}

inline bool subsets_meet(const ClosedSubset& a, const ClosedSubset& b) {
  return !subset_intersect(a, b).is_empty();
}

/// Closed `radius`-neighbourhood of the subset, spreading one hop through
/// vertices (radius is meant to be far below any edge length).
inline ClosedSubset subset_expand(const ClosedSubset& a, double radius) {
  const MetricGraph& g = a.graph();
  std::vector<std::vector<Interval>> out(static_cast<std::size_t>(g.edge_count()));
  std::vector<double> reach(static_cast<std::size_t>(g.vertex_count()), -1.0);
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    for (const auto& iv : a.intervals(e)) {
      out[static_cast<std::size_t>(e)].push_back({iv.lo - radius, iv.hi + radius});
      if (iv.lo - radius <= 0.0) reach[static_cast<std::size_t>(ed.u)] = std::max(reach[static_cast<std::size_t>(ed.u)], radius - iv.lo);
      if (iv.hi + radius >= ed.length)
        reach[static_cast<std::size_t>(ed.v)] = std::max(reach[static_cast<std::size_t>(ed.v)], radius - (ed.length - iv.hi));
    }
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    const double r = reach[static_cast<std::size_t>(v)];
    if (r < 0.0) continue;
    for (const auto& inc : g.incident(v)) {
      const double len = g.edge(inc.edge).length;
      out[static_cast<std::size_t>(inc.edge)].push_back(inc.at_start ? Interval{0.0, r} : Interval{len - r, len});
    }
  }
  return ClosedSubset::from_intervals(g, std::move(out));
}

/// a ⊆ (b expanded by `slack`).
inline bool subset_within(const ClosedSubset& a, const ClosedSubset& b, double slack) {
  a.graph().require_same(b.graph());
  const ClosedSubset big = subset_expand(b, slack);
  const MetricGraph& g = a.graph();
  const double tol = g.tol_len();
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& cover = big.intervals(e);
    for (const auto& iv : a.intervals(e)) {
      const bool inside = std::any_of(cover.begin(), cover.end(), [&](const Interval& c) {
        return c.lo <= iv.lo + tol && iv.hi <= c.hi + tol;
      });
      if (!inside) return false;
    }
  }
  return true;
}

/// Mutual containment up to `slack` (a Hausdorff-style comparison).
inline bool subset_approx_equal(const ClosedSubset& a, const ClosedSubset& b, double slack) {
  return subset_within(a, b, slack) && subset_within(b, a, slack);
}

}  // namespace divgraph

#endif  // DIVGRAPH_CLOSED_SUBSET_HPP
