#ifndef DIVGRAPH_GRAPH_HPP
#define DIVGRAPH_GRAPH_HPP

// Compact metric graphs and points on them.
//
// Edges carry positive lengths; a point is either a vertex or an interior
// point of an edge given by its offset from the edge's first endpoint.
// Self-loops are split by an auto-generated midpoint vertex at construction,
// so internally every edge joins two distinct vertices. The user-facing edge
// ids and offsets of a split loop are remapped transparently by locate() and
// user_coordinates().

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "divgraph/errors.hpp"

namespace divgraph {

/// Relative tolerance factors shared by every computation on a graph.
struct Tolerances {
  /// Interval merging and point canonicalization: len_rel * total length.
  double len_rel = 1e-12;
  /// Extremum loci, level sets, coefficient pruning: val_rel * max(1, |f|).
  double val_rel = 1e-9;
  /// Slack used when certificates compare two closed subsets for equality.
  double cmp_rel = 1e-6;
};

struct EdgeSpec {
  std::string id;
  std::string u;
  std::string v;
  double length = 0.0;
};

struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
};

/// A location on the graph in canonical form: either `vertex >= 0`, or an
/// interior point `edge >= 0` with 0 < offset < length.
struct PointOnGraph {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;

  static PointOnGraph at_vertex(int v) { return PointOnGraph{v, -1, 0.0}; }
  static PointOnGraph interior(int e, double x) { return PointOnGraph{-1, e, x}; }

  bool is_vertex() const { return vertex >= 0; }

  // Vertices sort before interior points; interior points by (edge, offset).
  friend std::partial_ordering operator<=>(const PointOnGraph& a, const PointOnGraph& b) {
    if (a.is_vertex() != b.is_vertex()) return a.is_vertex() ? std::partial_ordering::less : std::partial_ordering::greater;
    if (a.is_vertex()) return a.vertex <=> b.vertex;
    if (a.edge != b.edge) return a.edge <=> b.edge;
    return a.offset <=> b.offset;
  }
  friend bool operator==(const PointOnGraph& a, const PointOnGraph& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
};

class MetricGraph {
 public:
  /// Internal edge between two distinct vertices, oriented u -> v.
  struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
    int source = 0;      // index of the user-facing edge it came from
    double base = 0.0;   // offset of this piece inside the user-facing edge
  };

  /// User-facing edge as given in the spec.
  struct SourceEdge {
    std::string id;
    int u = 0;
    int v = 0;
    double length = 0.0;
    std::vector<int> pieces;  // internal edges, in order along the source edge
  };

  /// One end of an internal edge at a vertex.
  struct Incidence {
    int edge = 0;
    bool at_start = true;  // true: the vertex is the edge's u end (offset 0)
  };

  MetricGraph() = default;

  int vertex_count() const { return static_cast<int>(impl_->vertex_ids.size()); }
  int edge_count() const { return static_cast<int>(impl_->edges.size()); }
  /// Vertices listed in the spec; synthetic loop midpoints come after them.
  int user_vertex_count() const { return impl_->user_vertex_count; }

  const Edge& edge(int e) const { return impl_->edges.at(static_cast<std::size_t>(e)); }
  const std::vector<Edge>& edges() const { return impl_->edges; }
  const std::vector<SourceEdge>& source_edges() const { return impl_->source_edges; }
  const std::string& vertex_id(int v) const { return impl_->vertex_ids.at(static_cast<std::size_t>(v)); }
  const std::vector<Incidence>& incident(int v) const { return impl_->incidence.at(static_cast<std::size_t>(v)); }
  bool is_synthetic_vertex(int v) const { return v >= impl_->user_vertex_count; }

  std::optional<int> find_vertex(const std::string& id) const {
    auto it = impl_->vertex_index.find(id);
    if (it == impl_->vertex_index.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_source_edge(const std::string& id) const {
    auto it = impl_->source_index.find(id);
    if (it == impl_->source_index.end()) return std::nullopt;
    return it->second;
  }

  double total_length() const { return impl_->total_length; }
  const Tolerances& tolerances() const { return impl_->tol; }
  double tol_len() const { return impl_->tol.len_rel * impl_->total_length; }
  double tol_cmp() const { return impl_->tol.cmp_rel * impl_->total_length; }

  /// Copy of this graph with different tolerance factors. The copy counts as
  /// a different graph for GraphMismatch checks.
  MetricGraph with_tolerances(const Tolerances& tol) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->tol = tol;
    MetricGraph g;
    g.impl_ = std::move(impl);
    return g;
  }

  bool same_as(const MetricGraph& other) const { return impl_ == other.impl_; }
  void require_same(const MetricGraph& other) const {
    if (!same_as(other)) throw GraphMismatch("objects belong to different graphs");
  }

  double vertex_distance(int a, int b) const {
    return impl_->apsp[static_cast<std::size_t>(a) * impl_->vertex_ids.size() + static_cast<std::size_t>(b)];
  }

  PointOnGraph vertex_point(int v) const {
    if (v < 0 || v >= vertex_count()) throw PointNotOnGraph("vertex index " + std::to_string(v));
    return PointOnGraph::at_vertex(v);
  }

  /// Canonical point at `offset` along internal edge `e`.
  PointOnGraph locate(int e, double offset) const {
    if (e < 0 || e >= edge_count()) throw PointNotOnGraph("edge index " + std::to_string(e));
    const Edge& ed = edge(e);
    const double tol = tol_len();
    if (!std::isfinite(offset) || offset < -tol || offset > ed.length + tol)
      throw PointNotOnGraph("offset " + std::to_string(offset) + " outside edge of length " +
                            std::to_string(ed.length));
    if (offset <= tol) return PointOnGraph::at_vertex(ed.u);
    if (offset >= ed.length - tol) return PointOnGraph::at_vertex(ed.v);
    return PointOnGraph::interior(e, offset);
  }

  /// Canonical point at `offset` along the user-facing edge `id`.
  PointOnGraph locate(const std::string& id, double offset) const {
    auto s = find_source_edge(id);
    if (!s) throw PointNotOnGraph("unknown edge '" + id + "'");
    const SourceEdge& src = impl_->source_edges[static_cast<std::size_t>(*s)];
    const double tol = tol_len();
    if (!std::isfinite(offset) || offset < -tol || offset > src.length + tol)
      throw PointNotOnGraph("offset " + std::to_string(offset) + " outside edge '" + id + "'");
    for (int piece : src.pieces) {
      const Edge& ed = edge(piece);
      if (offset <= ed.base + ed.length || piece == src.pieces.back())
        return locate(piece, std::clamp(offset - ed.base, 0.0, ed.length));
    }
    throw PointNotOnGraph("edge '" + id + "' has no pieces");
  }

  PointOnGraph locate(const std::string& vertex) const {
    auto v = find_vertex(vertex);
    if (!v || is_synthetic_vertex(*v)) throw PointNotOnGraph("unknown vertex '" + vertex + "'");
    return PointOnGraph::at_vertex(*v);
  }

  /// Throws PointNotOnGraph unless `p` is a canonical point of this graph.
  void validate(const PointOnGraph& p) const {
    if (p.is_vertex()) {
      if (p.vertex >= vertex_count()) throw PointNotOnGraph("vertex index " + std::to_string(p.vertex));
      return;
    }
    if (p.edge < 0 || p.edge >= edge_count()) throw PointNotOnGraph("edge index " + std::to_string(p.edge));
    if (!(p.offset > 0.0 && p.offset < edge(p.edge).length)) throw PointNotOnGraph("offset outside edge interior");
  }

  /// User-facing coordinates: a vertex id, or (source edge id, offset).
  struct UserCoordinates {
    std::optional<std::string> vertex;
    std::string edge;
    double offset = 0.0;
  };
  UserCoordinates user_coordinates(const PointOnGraph& p) const {
    validate(p);
    UserCoordinates out;
    if (p.is_vertex() && !is_synthetic_vertex(p.vertex)) {
      out.vertex = vertex_id(p.vertex);
      return out;
    }
    if (p.is_vertex()) {
      // Loop midpoint: the end of the first piece of its loop.
      for (const auto& src : impl_->source_edges)
        if (src.pieces.size() == 2 && edge(src.pieces[0]).v == p.vertex) {
          out.edge = src.id;
          out.offset = edge(src.pieces[0]).length;
          return out;
        }
    }
    const Edge& ed = edge(p.edge);
    out.edge = impl_->source_edges[static_cast<std::size_t>(ed.source)].id;
    out.offset = ed.base + p.offset;
    return out;
  }

  /// (vertex, distance) pairs from a point to the ends of its edge.
  std::vector<std::pair<int, double>> anchors(const PointOnGraph& p) const {
    if (p.is_vertex()) return {{p.vertex, 0.0}};
    const Edge& ed = edge(p.edge);
    return {{ed.u, p.offset}, {ed.v, ed.length - p.offset}};
  }

  friend MetricGraph build_graph(const GraphSpec& spec, const Tolerances& tol);

 private:
  struct Impl {
    std::vector<std::string> vertex_ids;
    std::unordered_map<std::string, int> vertex_index;
    int user_vertex_count = 0;
    std::vector<Edge> edges;
    std::vector<SourceEdge> source_edges;
    std::unordered_map<std::string, int> source_index;
    std::vector<std::vector<Incidence>> incidence;
    std::vector<double> apsp;
    double total_length = 0.0;
    Tolerances tol;
  };
  std::shared_ptr<const Impl> impl_ = std::make_shared<Impl>();
};

/// Validates a spec and builds the graph. Self-loops are split at their
/// midpoint by a synthetic vertex.
inline MetricGraph build_graph(const GraphSpec& spec, const Tolerances& tol = {}) {
  auto impl = std::make_shared<MetricGraph::Impl>();
  impl->tol = tol;
  for (const auto& id : spec.vertices) {
    if (id.empty()) throw InvalidGraphSpec("empty vertex id");
    if (!impl->vertex_index.emplace(id, static_cast<int>(impl->vertex_ids.size())).second)
      throw InvalidGraphSpec("duplicate vertex id '" + id + "'");
    impl->vertex_ids.push_back(id);
  }
  impl->user_vertex_count = static_cast<int>(impl->vertex_ids.size());
  if (spec.edges.empty()) throw InvalidGraphSpec("graph has no edges");

  auto vertex_of = [&](const std::string& id) {
    auto it = impl->vertex_index.find(id);
    if (it == impl->vertex_index.end() || it->second >= impl->user_vertex_count)
      throw InvalidGraphSpec("edge endpoint '" + id + "' is not a vertex");
    return it->second;
  };

  for (const auto& es : spec.edges) {
    if (es.id.empty()) throw InvalidGraphSpec("empty edge id");
    if (!(es.length > 0.0) || !std::isfinite(es.length))
      throw NonPositiveEdgeLength("edge '" + es.id + "' has length " + std::to_string(es.length));
    const int sidx = static_cast<int>(impl->source_edges.size());
    if (!impl->source_index.emplace(es.id, sidx).second) throw DuplicateEdgeId("edge id '" + es.id + "'");
    MetricGraph::SourceEdge src{es.id, vertex_of(es.u), vertex_of(es.v), es.length, {}};
    if (src.u != src.v) {
      src.pieces.push_back(static_cast<int>(impl->edges.size()));
      impl->edges.push_back({src.u, src.v, es.length, sidx, 0.0});
    } else {
      std::string mid = "__mid:" + es.id;
      while (impl->vertex_index.count(mid)) mid += "_";
      const int m = static_cast<int>(impl->vertex_ids.size());
      impl->vertex_index.emplace(mid, m);
      impl->vertex_ids.push_back(mid);
      const double half = 0.5 * es.length;
      src.pieces.push_back(static_cast<int>(impl->edges.size()));
      impl->edges.push_back({src.u, m, half, sidx, 0.0});
      src.pieces.push_back(static_cast<int>(impl->edges.size()));
      impl->edges.push_back({m, src.u, es.length - half, sidx, half});
    }
    impl->source_edges.push_back(std::move(src));
    impl->total_length += es.length;
  }

  const std::size_t n = impl->vertex_ids.size();
  impl->incidence.assign(n, {});
  for (std::size_t e = 0; e < impl->edges.size(); ++e) {
    const auto& ed = impl->edges[e];
    impl->incidence[static_cast<std::size_t>(ed.u)].push_back({static_cast<int>(e), true});
    impl->incidence[static_cast<std::size_t>(ed.v)].push_back({static_cast<int>(e), false});
  }

  // All-pairs shortest paths; desk-scale graphs only.
  const double inf = std::numeric_limits<double>::infinity();
  impl->apsp.assign(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) impl->apsp[i * n + i] = 0.0;
  for (const auto& ed : impl->edges) {
    auto a = static_cast<std::size_t>(ed.u), b = static_cast<std::size_t>(ed.v);
    impl->apsp[a * n + b] = std::min(impl->apsp[a * n + b], ed.length);
    impl->apsp[b * n + a] = std::min(impl->apsp[b * n + a], ed.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        impl->apsp[i * n + j] = std::min(impl->apsp[i * n + j], impl->apsp[i * n + k] + impl->apsp[k * n + j]);
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(impl->apsp[j]))
      throw DisconnectedGraph("vertex '" + impl->vertex_ids[j] + "' is unreachable from '" + impl->vertex_ids[0] + "'");

  MetricGraph g;
  g.impl_ = std::move(impl);
  return g;
}

/// Shortest-path distance between two points.
inline double dist(const MetricGraph& g, const PointOnGraph& p, const PointOnGraph& q) {
  g.validate(p);
  g.validate(q);
  double best = std::numeric_limits<double>::infinity();
  if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge) best = std::abs(p.offset - q.offset);
  for (auto [a, da] : g.anchors(p))
    for (auto [b, db] : g.anchors(q)) best = std::min(best, da + g.vertex_distance(a, b) + db);
  return best;
}

/// True if two canonical points coincide up to the length tolerance.
inline bool same_point(const MetricGraph& g, const PointOnGraph& a, const PointOnGraph& b) {
  if (a.is_vertex() || b.is_vertex()) return a.is_vertex() && b.is_vertex() && a.vertex == b.vertex;
  return a.edge == b.edge && std::abs(a.offset - b.offset) <= g.tol_len();
}

}  // namespace divgraph

#endif  // DIVGRAPH_GRAPH_HPP
