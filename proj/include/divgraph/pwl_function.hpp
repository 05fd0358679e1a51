#ifndef DIVGRAPH_PWL_FUNCTION_HPP
#define DIVGRAPH_PWL_FUNCTION_HPP

// Continuous piecewise-linear functions on a metric graph.
//
// Each internal edge stores its breakpoints (offset, value) in strictly
// increasing offset order, always including both edge ends, and the slope of
// every piece between consecutive breakpoints. Slopes are carried through all
// operations instead of being re-derived from value differences, so pieces
// far shorter than the edge keep accurate slopes. The Laplacian of such a
// function is the discrete measure sum_p sigma_p delta_p with -sigma_p the
// sum of the outgoing slopes at p (see pwl_divisor).

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "divgraph/closed_subset.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/signed_divisor.hpp"

namespace divgraph {

struct Breakpoint {
  double offset = 0.0;
  double value = 0.0;
};

class PwlFunction {
 public:
  PwlFunction() = default;

  /// Takes ownership of per-edge breakpoint lists; slopes are the value
  /// differences. Offsets closer than the length tolerance are merged (values
  /// averaged); the edge ends are snapped to 0 and the edge length.
  PwlFunction(MetricGraph g, std::vector<std::vector<Breakpoint>> per_edge)
      : PwlFunction(std::move(g), std::move(per_edge), {}) {}

  /// As above with the slope of each piece given (slopes[e].size() ==
  /// per_edge[e].size() - 1); an empty `slopes` derives them from values.
  /// A piece collapsed by merging is dropped together with its slope.
  PwlFunction(MetricGraph g, std::vector<std::vector<Breakpoint>> per_edge, std::vector<std::vector<double>> slopes)
      : graph_(std::move(g)), edges_(std::move(per_edge)) {
    if (edges_.size() != static_cast<std::size_t>(graph_.edge_count()))
      throw InvalidRange("breakpoint lists do not match the edge count");
    if (!slopes.empty() && slopes.size() != edges_.size()) throw InvalidRange("slope lists do not match the edge count");
    const double tol = graph_.tol_len();
    slopes_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto& bps = edges_[e];
      const double len = graph_.edge(static_cast<int>(e)).length;
      if (bps.size() < 2) throw InvalidRange("an edge needs at least its two end breakpoints");
      const bool given = !slopes.empty();
      if (given && slopes[e].size() + 1 != bps.size()) throw InvalidRange("one slope per piece is required");
      std::vector<Breakpoint> out;
      std::vector<double> out_slopes;
      out.reserve(bps.size());
      int run = 1;
      for (std::size_t i = 0; i < bps.size(); ++i) {
        const auto& b = bps[i];
        if (!out.empty() && b.offset <= out.back().offset + tol) {
          if (b.offset < out.back().offset - tol) throw InvalidRange("breakpoints not sorted");
          ++run;
          out.back().value += (b.value - out.back().value) / run;
        } else {
          if (!out.empty() && given) out_slopes.push_back(slopes[e][i - 1]);
          out.push_back(b);
          run = 1;
        }
      }
      if (std::abs(out.front().offset) > tol || std::abs(out.back().offset - len) > tol || out.size() < 2)
        throw InvalidRange("breakpoints must span the whole edge");
      out.front().offset = 0.0;
      out.back().offset = len;
      if (!given)
        for (std::size_t i = 1; i < out.size(); ++i)
          out_slopes.push_back((out[i].value - out[i - 1].value) / (out[i].offset - out[i - 1].offset));
      bps = std::move(out);
      slopes_[e] = std::move(out_slopes);
    }
  }

  static PwlFunction constant(const MetricGraph& g, double c) {
    std::vector<std::vector<Breakpoint>> per_edge;
    per_edge.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const auto& ed : g.edges()) per_edge.push_back({{0.0, c}, {ed.length, c}});
    return PwlFunction(g, std::move(per_edge));
  }

  const MetricGraph& graph() const { return graph_; }
  const std::vector<Breakpoint>& breakpoints(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  /// slopes(e)[i] is the slope on [breakpoints(e)[i], breakpoints(e)[i + 1]].
  const std::vector<double>& slopes(int e) const { return slopes_.at(static_cast<std::size_t>(e)); }

  /// Index of the piece of edge e that contains offset x (the left one at a
  /// breakpoint).
  std::size_t piece_at(int e, double x) const {
    const auto& bps = breakpoints(e);
    auto it = std::upper_bound(bps.begin() + 1, bps.end() - 1, x, [](double y, const Breakpoint& b) { return y < b.offset; });
    return static_cast<std::size_t>(it - bps.begin()) - 1;
  }

  double value_at_vertex(int v) const {
    const auto& inc = graph_.incident(v).front();
    const auto& bps = edges_[static_cast<std::size_t>(inc.edge)];
    return inc.at_start ? bps.front().value : bps.back().value;
  }

  /// Largest |f| over the graph.
  double max_abs() const {
    double m = 0.0;
    for (const auto& bps : edges_)
      for (const auto& b : bps) m = std::max(m, std::abs(b.value));
    return m;
  }

  double min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& bps : edges_)
      for (const auto& b : bps) m = std::min(m, b.value);
    return m;
  }

  double max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& bps : edges_)
      for (const auto& b : bps) m = std::max(m, b.value);
    return m;
  }

  /// Value tolerance tau_val = val_rel * max(1, max|f|).
  double tol_val() const { return graph_.tolerances().val_rel * std::max(1.0, max_abs()); }

  /// Largest disagreement of vertex values across incident edges.
  double continuity_defect() const {
    double worst = 0.0;
    for (int v = 0; v < graph_.vertex_count(); ++v) {
      const double ref = value_at_vertex(v);
      for (const auto& inc : graph_.incident(v)) {
        const auto& bps = edges_[static_cast<std::size_t>(inc.edge)];
        worst = std::max(worst, std::abs((inc.at_start ? bps.front().value : bps.back().value) - ref));
      }
    }
    return worst;
  }

  double eval_on_edge(int e, double x) const {
    const auto& bps = edges_.at(static_cast<std::size_t>(e));
    auto it = std::lower_bound(bps.begin(), bps.end(), x, [](const Breakpoint& b, double y) { return b.offset < y; });
    if (it == bps.begin()) return bps.front().value;
    if (it == bps.end()) return bps.back().value;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.offset == x) return hi.value;
    const double w = (x - lo.offset) / (hi.offset - lo.offset);
    return lo.value + w * (hi.value - lo.value);
  }

  /// x -> a * f(x) + c.
  PwlFunction affine_map(double a, double c) const {
    PwlFunction out = *this;
    for (auto& bps : out.edges_)
      for (auto& b : bps) b.value = a * b.value + c;
    for (auto& ss : out.slopes_)
      for (auto& sl : ss) sl *= a;
    return out;
  }

 private:
  MetricGraph graph_;
  std::vector<std::vector<Breakpoint>> edges_;
  std::vector<std::vector<double>> slopes_;
};

inline double pwl_eval(const PwlFunction& f, const PointOnGraph& p) {
  f.graph().validate(p);
  if (p.is_vertex()) return f.value_at_vertex(p.vertex);
  return f.eval_on_edge(p.edge, p.offset);
}

enum class CombineMode { add, sub };

/// Pointwise f + g or f - g over the union of both breakpoint sets.
inline PwlFunction pwl_combine(const PwlFunction& f, const PwlFunction& g, CombineMode mode) {
  f.graph().require_same(g.graph());
  const MetricGraph& gr = f.graph();
  const double sign = mode == CombineMode::add ? 1.0 : -1.0;
  const double tol = gr.tol_len();
  std::vector<std::vector<Breakpoint>> out(static_cast<std::size_t>(gr.edge_count()));
  std::vector<std::vector<double>> slopes(static_cast<std::size_t>(gr.edge_count()));
  for (int e = 0; e < gr.edge_count(); ++e) {
    const auto& a = f.breakpoints(e);
    const auto& b = g.breakpoints(e);
    auto& o = out[static_cast<std::size_t>(e)];
    o.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      double x;
      if (j >= b.size() || (i < a.size() && a[i].offset < b[j].offset - tol)) {
        x = a[i].offset;
        o.push_back({x, a[i].value + sign * g.eval_on_edge(e, x)});
        ++i;
      } else if (i >= a.size() || b[j].offset < a[i].offset - tol) {
        x = b[j].offset;
        o.push_back({x, f.eval_on_edge(e, x) + sign * b[j].value});
        ++j;
      } else {
        o.push_back({a[i].offset, a[i].value + sign * b[j].value});
        ++i;
        ++j;
      }
    }
    auto& s = slopes[static_cast<std::size_t>(e)];
    for (std::size_t k = 1; k < o.size(); ++k) {
      const double mid = 0.5 * (o[k - 1].offset + o[k].offset);
      s.push_back(f.slopes(e)[f.piece_at(e, mid)] + sign * g.slopes(e)[g.piece_at(e, mid)]);
    }
  }
  return PwlFunction(gr, std::move(out), std::move(slopes));
}

inline PwlFunction pwl_scale(const PwlFunction& f, double a) {
  return f.affine_map(a, 0.0);
}

inline PwlFunction pwl_shift(const PwlFunction& f, double c) {
  return f.affine_map(1.0, c);
}

enum class ClipMode { min, max };

/// Pointwise min(c, f) or max(c, f); a breakpoint is inserted wherever f
/// crosses the level c strictly inside a piece. Pieces on the kept side of
/// the level keep their slope, clipped pieces are flat.
inline PwlFunction pwl_clip(const PwlFunction& f, double c, ClipMode mode) {
  const MetricGraph& gr = f.graph();
  const double tol = gr.tol_len();
  auto clip = [&](double v) { return mode == ClipMode::min ? std::min(v, c) : std::max(v, c); };
  auto kept = [&](double v) { return mode == ClipMode::min ? v < c : v > c; };
  std::vector<std::vector<Breakpoint>> out(static_cast<std::size_t>(gr.edge_count()));
  std::vector<std::vector<double>> slopes(static_cast<std::size_t>(gr.edge_count()));
  for (int e = 0; e < gr.edge_count(); ++e) {
    const auto& bps = f.breakpoints(e);
    auto& o = out[static_cast<std::size_t>(e)];
    auto& s = slopes[static_cast<std::size_t>(e)];
    o.reserve(bps.size() + 4);
    o.push_back({bps.front().offset, clip(bps.front().value)});
    for (std::size_t i = 1; i < bps.size(); ++i) {
      const auto& a = bps[i - 1];
      const auto& b = bps[i];
      const double slope = f.slopes(e)[i - 1];
      auto close_piece = [&](double x_from, double x_to) {
        const double w = (0.5 * (x_from + x_to) - a.offset) / (b.offset - a.offset);
        s.push_back(kept(a.value + w * (b.value - a.value)) ? slope : 0.0);
      };
      if ((a.value - c) * (b.value - c) < 0.0) {
        const double x = a.offset + (c - a.value) / (b.value - a.value) * (b.offset - a.offset);
        if (x > a.offset + tol && x < b.offset - tol) {
          close_piece(a.offset, x);
          o.push_back({x, c});
          close_piece(x, b.offset);
          o.push_back({b.offset, clip(b.value)});
          continue;
        }
      }
      close_piece(a.offset, b.offset);
      o.push_back({b.offset, clip(b.value)});
    }
  }
  return PwlFunction(gr, std::move(out), std::move(slopes));
}

/// f - min f.
inline PwlFunction pwl_normalize(const PwlFunction& f) {
  return f.affine_map(1.0, -f.min_value());
}

/// f^{-1}([lo, hi]) as a closed subset.
inline ClosedSubset pwl_level_set(const PwlFunction& f, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidRange("level-set bounds must satisfy lo <= hi");
  const MetricGraph& gr = f.graph();
  std::vector<std::vector<Interval>> out(static_cast<std::size_t>(gr.edge_count()));
  for (int e = 0; e < gr.edge_count(); ++e) {
    const auto& bps = f.breakpoints(e);
    auto& o = out[static_cast<std::size_t>(e)];
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const auto& b = bps[i];
      if (b.value >= lo && b.value <= hi) o.push_back({b.offset, b.offset});
      if (i + 1 == bps.size()) continue;
      const auto& n = bps[i + 1];
      if (b.value == n.value) {
        if (b.value >= lo && b.value <= hi) o.push_back({b.offset, n.offset});
        continue;
      }
      // Preimage of [lo, hi] under the affine piece, as a parameter range.
      const double dv = n.value - b.value;
      double s0 = (lo - b.value) / dv;
      double s1 = (hi - b.value) / dv;
      if (s0 > s1) std::swap(s0, s1);
      s0 = std::max(s0, 0.0);
      s1 = std::min(s1, 1.0);
      if (s0 <= s1) {
        const double w = n.offset - b.offset;
        o.push_back({b.offset + s0 * w, b.offset + s1 * w});
      }
    }
  }
  return ClosedSubset::from_intervals(gr, std::move(out));
}

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  ClosedSubset gmin;
  ClosedSubset gmax;
};

inline Extrema pwl_extrema(const PwlFunction& f) {
  const double lo = f.min_value();
  const double hi = f.max_value();
  const double tol = f.tol_val();
  return Extrema{lo, hi, pwl_level_set(f, lo, lo + tol), pwl_level_set(f, hi - tol, hi)};
}

/// Minimizer locus f^{-1}([min, min + tau_val]).
inline ClosedSubset pwl_gmin(const PwlFunction& f) {
  const double lo = f.min_value();
  return pwl_level_set(f, lo, lo + f.tol_val());
}

inline ClosedSubset pwl_gmax(const PwlFunction& f) {
  const double hi = f.max_value();
  return pwl_level_set(f, hi - f.tol_val(), hi);
}

/// Exact integral over the graph (trapezoids are exact on affine pieces).
inline double pwl_integral(const PwlFunction& f) {
  double total = 0.0;
  for (int e = 0; e < f.graph().edge_count(); ++e) {
    const auto& bps = f.breakpoints(e);
    for (std::size_t i = 1; i < bps.size(); ++i)
      total += 0.5 * (bps[i].value + bps[i - 1].value) * (bps[i].offset - bps[i - 1].offset);
  }
  return total;
}

/// Laplacian of f as a signed divisor: sigma_p = -(sum of outgoing slopes).
/// Coefficients with |sigma| <= tau_val are dropped.
inline SignedDivisor pwl_divisor(const PwlFunction& f) {
  const MetricGraph& gr = f.graph();
  std::vector<double> at_vertex(static_cast<std::size_t>(gr.vertex_count()), 0.0);
  SignedDivisor out;
  for (int e = 0; e < gr.edge_count(); ++e) {
    const auto& bps = f.breakpoints(e);
    const auto& sl = f.slopes(e);
    const auto& ed = gr.edge(e);
    at_vertex[static_cast<std::size_t>(ed.u)] -= sl.front();
    at_vertex[static_cast<std::size_t>(ed.v)] += sl.back();
    for (std::size_t i = 1; i + 1 < bps.size(); ++i) out.add(gr, gr.locate(e, bps[i].offset), sl[i - 1] - sl[i]);
  }
  for (int v = 0; v < gr.vertex_count(); ++v) out.add(gr, PointOnGraph::at_vertex(v), at_vertex[static_cast<std::size_t>(v)]);
  out.prune(f.tol_val());
  return out;
}

/// Removes interior breakpoints where the slope does not change (|sigma| <=
/// tau_val); the merged piece takes the length-weighted mean slope.
inline PwlFunction pwl_simplify(const PwlFunction& f) {
  const MetricGraph& gr = f.graph();
  const double tol = f.tol_val();
  std::vector<std::vector<Breakpoint>> out(static_cast<std::size_t>(gr.edge_count()));
  std::vector<std::vector<double>> slopes(static_cast<std::size_t>(gr.edge_count()));
  for (int e = 0; e < gr.edge_count(); ++e) {
    const auto& bps = f.breakpoints(e);
    const auto& sl = f.slopes(e);
    auto& o = out[static_cast<std::size_t>(e)];
    auto& s = slopes[static_cast<std::size_t>(e)];
    o.push_back(bps.front());
    double rise = 0.0;  // slope times length accumulated over the open piece
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      rise += sl[i] * (bps[i + 1].offset - bps[i].offset);
      const bool last = i + 2 == bps.size();
      if (last || std::abs(sl[i] - sl[i + 1]) > tol) {
        s.push_back(rise / (bps[i + 1].offset - o.back().offset));
        o.push_back(bps[i + 1]);
        rise = 0.0;
      }
    }
  }
  return PwlFunction(gr, std::move(out), std::move(slopes));
}

}  // namespace divgraph

#endif  // DIVGRAPH_PWL_FUNCTION_HPP
