#ifndef DIVGRAPH_POTENTIAL_HPP
#define DIVGRAPH_POTENTIAL_HPP

// Potentials on the edge-length resistor network.
//
// A function with prescribed Laplacian m (a signed divisor of degree 0) is
// found in two stages. A mass w at offset x of an edge of length L acts on
// the vertices like loads w (L - x) / L and w x / L at its ends, so the
// grounded conductance Laplacian of the unsubdivided graph yields the vertex
// values. Along each edge the function is the affine interpolation of its
// end values plus the exact Green's function sum w x (L - y) / L of the
// interior masses (x <= y). No conductance exceeds 1 / (shortest edge), so
// nearly coincident masses cost no accuracy. With the Laplacian sign
// convention sigma_p = -(sum of outgoing slopes), the node equation at a
// vertex reads sum_j c_ij (v_i - v_j) = load_i.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "divgraph/divisor.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/pwl_function.hpp"
#include "divgraph/signed_divisor.hpp"

namespace divgraph {

/// Vertex Laplacian of the graph plus, per edge, the chain of breakpoints at
/// a finite set of interior points (merged within the length tolerance).
class LaplacianSystem {
 public:
  struct Node {
    double offset = 0.0;
    int index = 0;  // vertex id at the ends, -1 - k for the k-th interior node
  };

  LaplacianSystem(const MetricGraph& g, const std::vector<PointOnGraph>& extra_points) : graph_(g) {
    chains_.resize(static_cast<std::size_t>(g.edge_count()));
    std::vector<std::vector<double>> interior(static_cast<std::size_t>(g.edge_count()));
    for (const auto& p : extra_points) {
      g.validate(p);
      if (!p.is_vertex()) interior[static_cast<std::size_t>(p.edge)].push_back(p.offset);
    }
    const double tol = g.tol_len();
    int next = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
      auto& xs = interior[static_cast<std::size_t>(e)];
      std::sort(xs.begin(), xs.end());
      auto& chain = chains_[static_cast<std::size_t>(e)];
      chain.push_back({0.0, g.edge(e).u});
      for (double x : xs)
        if (x > chain.back().offset + tol && x < g.edge(e).length - tol) chain.push_back({x, -1 - next++});
      chain.push_back({g.edge(e).length, g.edge(e).v});
    }
    interior_count_ = next;
    const int n = g.vertex_count();
    matrix_ = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < g.edge_count(); ++e) {
      const double c = 1.0 / g.edge(e).length;
      const int a = g.edge(e).u, b = g.edge(e).v;
      matrix_(a, a) += c;
      matrix_(b, b) += c;
      matrix_(a, b) -= c;
      matrix_(b, a) -= c;
    }
  }

  /// Number of nodes: vertices plus distinct interior points.
  int size() const { return graph_.vertex_count() + interior_count_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::vector<Node>& chain(int e) const { return chains_.at(static_cast<std::size_t>(e)); }

  /// Solves for the function with Laplacian m, zero at vertex 0. Every point
  /// of supp(m) must be a vertex or one of the extra points.
  PwlFunction solve(const SignedDivisor& m) const {
    const int n = graph_.vertex_count();
    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    std::vector<std::vector<double>> mass(chains_.size());
    for (std::size_t e = 0; e < chains_.size(); ++e) mass[e].assign(chains_[e].size(), 0.0);
    for (const auto& t : m.terms()) {
      if (t.point.is_vertex()) {
        load(t.point.vertex) += t.weight;
        continue;
      }
      const auto e = static_cast<std::size_t>(t.point.edge);
      mass[e][position(t.point)] += t.weight;
    }
    for (std::size_t e = 0; e < chains_.size(); ++e) {
      const double len = graph_.edge(static_cast<int>(e)).length;
      for (std::size_t k = 1; k + 1 < chains_[e].size(); ++k) {
        const double x = chains_[e][k].offset;
        load(chains_[e].front().index) += mass[e][k] * (len - x) / len;
        load(chains_[e].back().index) += mass[e][k] * x / len;
      }
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (n > 1) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(matrix_.bottomRightCorner(n - 1, n - 1));
      v.tail(n - 1) = ldlt.solve(load.tail(n - 1));
    }
    std::vector<std::vector<Breakpoint>> per_edge(chains_.size());
    std::vector<std::vector<double>> slopes(chains_.size());
    for (std::size_t e = 0; e < chains_.size(); ++e) {
      const auto& chain = chains_[e];
      const auto& w = mass[e];
      const double len = graph_.edge(static_cast<int>(e)).length;
      const double vu = v(chain.front().index), vv = v(chain.back().index);
      for (std::size_t k = 0; k < chain.size(); ++k) {
        const double y = chain[k].offset;
        double value = k == 0 ? vu : k + 1 == chain.size() ? vv : vu + (vv - vu) * (y / len);
        if (k > 0 && k + 1 < chain.size())
          for (std::size_t j = 1; j + 1 < chain.size(); ++j) {
            const double lo = std::min(y, chain[j].offset), hi = std::max(y, chain[j].offset);
            value += w[j] * lo * (len - hi) / len;
          }
        per_edge[e].push_back({y, value});
      }
      // Slope on piece k: masses left of it pull down by x_j / L, masses
      // right of it push up by (L - x_j) / L.
      double right = 0.0;
      for (std::size_t j = 1; j + 1 < chain.size(); ++j) right += w[j] * (len - chain[j].offset) / len;
      double left = 0.0;
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        if (k > 0) {
          right -= w[k] * (len - chain[k].offset) / len;
          left += w[k] * chain[k].offset / len;
        }
        slopes[e].push_back((vv - vu) / len + right - left);
      }
    }
    return PwlFunction(graph_, std::move(per_edge), std::move(slopes));
  }

 private:
  /// Position in the chain of an interior point.
  std::size_t position(const PointOnGraph& p) const {
    const auto& c = chain(p.edge);
    const double tol = graph_.tol_len();
    for (std::size_t k = 1; k + 1 < c.size(); ++k)
      if (std::abs(c[k].offset - p.offset) <= tol) return k;
    throw PointNotOnGraph("point is not a node of the subdivided network");
  }

  MetricGraph graph_;
  std::vector<std::vector<Node>> chains_;
  Eigen::MatrixXd matrix_;
  int interior_count_ = 0;
};

/// Some function f with Laplacian m (degree of m must vanish), f = 0 at
/// vertex 0. Breakpoints that carry no Laplacian mass are dropped.
inline PwlFunction solve_laplacian(const MetricGraph& g, const SignedDivisor& m) {
  const double deg = m.degree();
  double scale = 0.0;
  for (const auto& t : m.terms()) scale += std::abs(t.weight);
  if (std::abs(deg) > 1e-9 * std::max(1.0, scale))
    throw DegreeMismatch("Laplacian right-hand side has degree " + std::to_string(deg));
  std::vector<PointOnGraph> pts;
  pts.reserve(m.size());
  for (const auto& t : m.terms()) pts.push_back(t.point);
  return pwl_simplify(LaplacianSystem(g, pts).solve(m));
}

/// j_q(., p): potential with unit current entering at p and leaving at the
/// grounded point q.
inline PwlFunction j_function(const MetricGraph& g, const PointOnGraph& q, const PointOnGraph& p) {
  g.validate(q);
  g.validate(p);
  if (same_point(g, p, q)) return PwlFunction::constant(g, 0.0);
  SignedDivisor m;
  m.add(g, p, 1.0);
  m.add(g, q, -1.0);
  PwlFunction f = solve_laplacian(g, m);
  const double at_q = pwl_eval(f, q);
  return pwl_shift(f, -at_q);
}

inline double effective_resistance(const MetricGraph& g, const PointOnGraph& p, const PointOnGraph& q) {
  if (same_point(g, p, q)) {
    g.validate(p);
    return 0.0;
  }
  return pwl_eval(j_function(g, q, p), p);
}

/// normalize(f_{d2 - d1}): minimum 0, Laplacian d2 - d1.
inline PwlFunction associated_function(const MetricGraph& g, const RDivisor& d1, const RDivisor& d2) {
  require_equal_degree(d1, d2);
  return pwl_normalize(solve_laplacian(g, difference(g, d2, d1)));
}

}  // namespace divgraph

#endif  // DIVGRAPH_POTENTIAL_HPP
