#ifndef DIVGRAPH_DIVISOR_HPP
#define DIVGRAPH_DIVISOR_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/signed_divisor.hpp"

namespace divgraph {

/// Effective real divisor: positive masses on canonical points.
class RDivisor {
 public:
  RDivisor() = default;

  /// Canonicalizes the terms (merging coincident points). Masses at or below
  /// the coefficient tolerance val_rel * max(1, degree) are dropped; a
  /// negative mass beyond it raises NonEffectiveDivisor.
  RDivisor(const MetricGraph& g, const std::vector<WeightedPoint>& terms) {
    SignedDivisor acc;
    for (const auto& t : terms) {
      g.validate(t.point);
      if (!std::isfinite(t.weight)) throw NonEffectiveDivisor("non-finite mass");
      acc.add(g, t.point, t.weight);
    }
    assign(g, acc);
  }

  RDivisor(const MetricGraph& g, const SignedDivisor& d) { assign(g, d); }

  /// A single point of mass `m`.
  static RDivisor point(const MetricGraph& g, const PointOnGraph& p, double m = 1.0) {
    return RDivisor(g, std::vector<WeightedPoint>{{p, m}});
  }

  const std::vector<WeightedPoint>& terms() const { return terms_.terms(); }
  const SignedDivisor& as_signed() const { return terms_; }
  double degree() const { return degree_; }
  bool is_empty() const { return terms_.is_empty(); }

  /// (d / deg) * this.
  RDivisor rescaled(double d) const {
    if (!(degree_ > 0.0)) throw ZeroDegreeInput("cannot rescale a divisor of degree 0");
    RDivisor out = *this;
    out.terms_ = terms_.scaled(d / degree_);
    out.degree_ = d;
    return out;
  }

 private:
  void assign(const MetricGraph& g, SignedDivisor d) {
    double deg = 0.0;
    for (const auto& t : d.terms()) deg += std::max(t.weight, 0.0);
    const double tol = g.tolerances().val_rel * std::max(1.0, deg);
    for (const auto& t : d.terms())
      if (t.weight < -tol) throw NonEffectiveDivisor("negative mass " + std::to_string(t.weight));
    d.prune(tol);
    for (const auto& t : d.terms())
      if (t.weight < 0.0) throw NonEffectiveDivisor("negative mass " + std::to_string(t.weight));
    terms_ = std::move(d);
    degree_ = terms_.degree();
  }

  SignedDivisor terms_;
  double degree_ = 0.0;
};

inline double degree_tolerance(double d) { return 1e-9 * std::max(1.0, std::abs(d)); }

inline void require_equal_degree(const RDivisor& a, const RDivisor& b) {
  if (std::abs(a.degree() - b.degree()) > degree_tolerance(std::max(a.degree(), b.degree())))
    throw DegreeMismatch("degrees " + std::to_string(a.degree()) + " and " + std::to_string(b.degree()));
}

/// b - a as a signed divisor.
inline SignedDivisor difference(const MetricGraph& g, const RDivisor& b, const RDivisor& a) {
  SignedDivisor out = b.as_signed();
  out.add(g, a.as_signed(), -1.0);
  return out;
}

}  // namespace divgraph

#endif  // DIVGRAPH_DIVISOR_HPP
