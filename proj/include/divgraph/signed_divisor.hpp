#ifndef DIVGRAPH_SIGNED_DIVISOR_HPP
#define DIVGRAPH_SIGNED_DIVISOR_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "divgraph/graph.hpp"

namespace divgraph {

struct WeightedPoint {
  PointOnGraph point;
  double weight = 0.0;
};

/// Finitely supported real-coefficient divisor. Points are canonical and
/// kept sorted; points closer than the length tolerance are merged.
class SignedDivisor {
 public:
  SignedDivisor() = default;

  const std::vector<WeightedPoint>& terms() const { return terms_; }
  bool is_empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double degree() const {
    double d = 0.0;
    for (const auto& t : terms_) d += t.weight;
    return d;
  }

  double coefficient(const MetricGraph& g, const PointOnGraph& p) const {
    for (const auto& t : terms_)
      if (same_point(g, t.point, p)) return t.weight;
    return 0.0;
  }

  void add(const MetricGraph& g, const PointOnGraph& p, double w) {
    const double tol = g.tol_len();
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p, [&](const WeightedPoint& t, const PointOnGraph& q) {
      if (!q.is_vertex() && !t.point.is_vertex() && t.point.edge == q.edge) return t.point.offset < q.offset - tol;
      return t.point < q;
    });
    if (it != terms_.end() && same_point(g, it->point, p)) {
      it->weight += w;
    } else {
      terms_.insert(it, WeightedPoint{p, w});
    }
  }

  void add(const MetricGraph& g, const SignedDivisor& other, double scale = 1.0) {
    for (const auto& t : other.terms_) add(g, t.point, scale * t.weight);
  }

  /// Drops every term with |weight| <= tol.
  void prune(double tol) {
    std::erase_if(terms_, [tol](const WeightedPoint& t) { return std::abs(t.weight) <= tol; });
  }

  SignedDivisor scaled(double a) const {
    SignedDivisor out = *this;
    for (auto& t : out.terms_) t.weight *= a;
    return out;
  }

 private:
  std::vector<WeightedPoint> terms_;
};

}  // namespace divgraph

#endif  // DIVGRAPH_SIGNED_DIVISOR_HPP
