#ifndef DIVGRAPH_DIVISOR_SPACE_HPP
#define DIVGRAPH_DIVISOR_SPACE_HPP

// The metric space of effective divisors of a fixed degree.
//
// rho(D1, D2) is the oscillation of the associated function f_{D2-D1}; the
// tropical path from D1 to D2 is P(t) = Laplacian(min(t rho, f)) + D1 with f
// the normalized associated function, and its image is the t-segment.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "divgraph/closed_subset.hpp"
#include "divgraph/divisor.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/line_search.hpp"
#include "divgraph/potential.hpp"
#include "divgraph/pwl_function.hpp"

namespace divgraph {

/// rho(d1, d2) = max normalize(f_{d2 - d1}).
inline double rho(const MetricGraph& g, const RDivisor& d1, const RDivisor& d2) {
  return associated_function(g, d1, d2).max_value();
}

/// Phi(d2 - d1) = integral of normalize(f_{d2 - d1}). Not symmetric.
inline double s_func(const MetricGraph& g, const RDivisor& d1, const RDivisor& d2) {
  return pwl_integral(associated_function(g, d1, d2));
}

/// Equality in the rho metric: rho < 1e-9 * max(1, degree).
inline bool divisors_equal(const MetricGraph& g, const RDivisor& a, const RDivisor& b) {
  if (std::abs(a.degree() - b.degree()) > degree_tolerance(std::max(a.degree(), b.degree()))) return false;
  return rho(g, a, b) < 1e-9 * std::max(1.0, a.degree());
}

/// Gmin(f_{d2 - d1}).
inline ClosedSubset gmin_of(const MetricGraph& g, const RDivisor& d1, const RDivisor& d2) {
  return pwl_gmin(associated_function(g, d1, d2));
}

/// Image of the tropical path between two endpoints, with its normalized
/// associated function and length cached.
class TSegment {
 public:
  TSegment(const MetricGraph& g, RDivisor from, RDivisor to)
      : from_(std::move(from)), to_(std::move(to)), f_(associated_function(g, from_, to_)), length_(f_.max_value()) {}

  const RDivisor& from() const { return from_; }
  const RDivisor& to() const { return to_; }
  /// normalize(f_{to - from}).
  const PwlFunction& function() const { return f_; }
  double length() const { return length_; }
  double degree() const { return from_.degree(); }
  const MetricGraph& graph() const { return f_.graph(); }
  bool is_degenerate() const { return length_ <= 1e-12 * std::max(1.0, degree()); }

  /// normalize(f_{P(t) - from}) = min(t * length, f).
  PwlFunction potential_at(double t) const { return pwl_clip(f_, t * length_, ClipMode::min); }

  TSegment reversed() const {
    TSegment out = *this;
    std::swap(out.from_, out.to_);
    const double len = length_;
    out.f_ = f_.affine_map(-1.0, len);
    return out;
  }

 private:
  RDivisor from_;
  RDivisor to_;
  PwlFunction f_;
  double length_ = 0.0;
};

inline void require_segment_degree(const TSegment& seg, const RDivisor& d) {
  if (std::abs(seg.degree() - d.degree()) > degree_tolerance(std::max(seg.degree(), d.degree())))
    throw DegreeMismatch("divisor degree " + std::to_string(d.degree()) + " vs segment degree " +
                         std::to_string(seg.degree()));
}

/// P(t) on the segment's tropical path, t in [0, 1].
inline RDivisor t_path_eval(const TSegment& seg, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterOutOfRange("t = " + std::to_string(t) + " not in [0, 1]");
  if (seg.is_degenerate() || t == 0.0) return seg.from();
  if (t == 1.0) return seg.to();
  const MetricGraph& g = seg.graph();
  SignedDivisor d = pwl_divisor(seg.potential_at(t));
  d.add(g, seg.from().as_signed());
  const double tol = g.tolerances().val_rel * std::max(1.0, seg.degree());
  SignedDivisor kept;
  double deg = 0.0;
  for (const auto& term : d.terms())
    if (term.weight > tol) {
      kept.add(g, term.point, term.weight);
      deg += term.weight;
    }
  return RDivisor(g, kept.scaled(seg.degree() / deg));
}

inline RDivisor t_path_eval(const MetricGraph& g, const RDivisor& d1, const RDivisor& d2, double t) {
  return t_path_eval(TSegment(g, d1, d2), t);
}

/// Membership via Gmin(f_{D1-D}) ∪ Gmin(f_{D2-D}) = Γ.
inline bool segment_contains(const MetricGraph& g, const TSegment& seg, const RDivisor& d) {
  require_segment_degree(seg, d);
  return subset_covers_gamma(subset_union(gmin_of(g, d, seg.from()), gmin_of(g, d, seg.to())));
}

/// Phi(P(t) - E) and rho(E, P(t)) along a segment without further Laplacian
/// solves: f_{P(t)-E} = min(t rho, f_{D2-D1}) + f_{D1-E}.
class SegmentObjective {
 public:
  /// `from_minus_e` is any associated function of seg.from() - E.
  SegmentObjective(const TSegment& seg, PwlFunction from_minus_e) : seg_(seg), base_(std::move(from_minus_e)) {}

  PwlFunction potential(double t) const {
    return pwl_combine(seg_.potential_at(t), base_, CombineMode::add);
  }
  double phi(double t) const { return pwl_integral(pwl_normalize(potential(t))); }
  double rho(double t) const {
    const PwlFunction f = potential(t);
    return f.max_value() - f.min_value();
  }

  /// Unique minimizer of t -> Phi(P(t) - E): 33-point grid, then
  /// golden-section refinement to 1e-10 in t.
  ScalarMinimum minimize() const {
    if (seg_.is_degenerate()) return {0.0, phi(0.0)};
    return grid_golden_minimize([this](double t) { return phi(t); }, 0.0, 1.0, 33, 1e-10);
  }

 private:
  const TSegment& seg_;
  PwlFunction base_;
};

/// Parameter of a divisor known to lie on the segment (isometry of the path).
inline double segment_parameter(const MetricGraph& g, const TSegment& seg, const RDivisor& d) {
  if (seg.is_degenerate()) return 0.0;
  return std::clamp(rho(g, seg.from(), d) / seg.length(), 0.0, 1.0);
}

/// s1 ∩ s2, which is again a t-segment (possibly a single divisor) or empty.
inline std::optional<TSegment> segment_intersection(const MetricGraph& g, const TSegment& s1, const TSegment& s2) {
  require_segment_degree(s1, s2.from());
  auto member = [&](double t) { return segment_contains(g, s2, t_path_eval(s1, t)); };

  std::optional<double> found;
  for (double t : {0.0, 1.0, 0.5})
    if (member(t)) {
      found = t;
      break;
    }
  // Parameters on s1 of the endpoints of s2 that lie on s1; the ends of the
  // intersection snap to these when bisection lands within 1e-6.
  std::vector<double> anchors;
  for (const RDivisor* end : {&s2.from(), &s2.to()})
    if (segment_contains(g, s1, *end)) anchors.push_back(segment_parameter(g, s1, *end));
  if (!found && !anchors.empty()) found = anchors.front();
  if (!found && !s1.is_degenerate()) {
    // Distance from s1(t) to s2 is quasiconvex in t; its zero set is the
    // intersection. f_{A - s1(t)} = f_{A - s1.from} - min(t rho1, f1).
    const PwlFunction to_a = associated_function(g, s1.from(), s2.from());
    auto distance_to_s2 = [&](double t) {
      const PwlFunction base = pwl_combine(to_a, s1.potential_at(t), CombineMode::sub);
      SegmentObjective obj(s2, base);
      return obj.rho(obj.minimize().x);
    };
    const ScalarMinimum m = grid_golden_minimize(distance_to_s2, 0.0, 1.0, 33, 1e-10);
    if (m.value <= 1e-7 * std::max(1.0, s1.length() + s2.length()) && member(m.x)) found = m.x;
  }
  if (!found) return std::nullopt;

  auto bisect = [&](double outside, double inside) {
    while (std::abs(inside - outside) > 1e-10) {
      const double mid = 0.5 * (inside + outside);
      (member(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  auto snap = [&](double t) {
    for (double a : anchors)
      if (std::abs(a - t) <= 1e-6) return a;
    return t;
  };
  const double t_lo = member(0.0) ? 0.0 : snap(bisect(0.0, *found));
  const double t_hi = member(1.0) ? 1.0 : snap(bisect(1.0, *found));
  RDivisor a = t_path_eval(s1, t_lo);
  if (t_hi - t_lo <= 1e-10) return TSegment(g, a, a);
  return TSegment(g, std::move(a), t_path_eval(s1, t_hi));
}

inline std::optional<TSegment> segment_intersection(const MetricGraph& g, const RDivisor& a1, const RDivisor& a2,
                                                    const RDivisor& b1, const RDivisor& b2) {
  return segment_intersection(g, TSegment(g, a1, a2), TSegment(g, b1, b2));
}

}  // namespace divgraph

#endif  // DIVGRAPH_DIVISOR_SPACE_HPP
