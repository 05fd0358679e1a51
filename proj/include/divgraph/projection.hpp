#ifndef DIVGRAPH_PROJECTION_HPP
#define DIVGRAPH_PROJECTION_HPP

// Canonical projection onto a compact tropical convex set (rescale, then
// reduce) and samplers of the retraction and contraction homotopies.

#include <algorithm>
#include <string>
#include <type_traits>
#include <variant>

#include "divgraph/divisor.hpp"
#include "divgraph/divisor_space.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/reduced.hpp"

namespace divgraph {

using ProjectionTarget = std::variant<TSegment, TConvexHull>;

inline double target_degree(const ProjectionTarget& target) {
  return std::visit([](const auto& t) { return t.degree(); }, target);
}

/// Reduced divisor of (d / deg e) * e in the target.
inline ReducedResult canonical_project_result(const MetricGraph& g, const ProjectionTarget& target, const RDivisor& e,
                                              bool strict = false) {
  if (e.is_empty() || !(e.degree() > 0.0)) throw ZeroDegreeInput("cannot project a divisor of degree 0");
  const RDivisor scaled = e.rescaled(target_degree(target));
  return std::visit(
      [&](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, TSegment>)
          return reduced_on_segment(g, t, scaled, strict);
        else
          return reduced_on_hull(g, t, scaled, HullSearchOptions{}, strict);
      },
      target);
}

inline RDivisor canonical_project(const MetricGraph& g, const ProjectionTarget& target, const RDivisor& e) {
  return canonical_project_result(g, target, e).divisor;
}

/// rho_T(d) = rho(d, project(d)).
inline double distance_to_target(const MetricGraph& g, const ProjectionTarget& target, const RDivisor& d) {
  return rho(g, d, canonical_project(g, target, d));
}

namespace detail {

inline void require_unit_parameter(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterOutOfRange("t = " + std::to_string(t) + " not in [0, 1]");
}

/// The point of tconv(anchor, d) at distance kappa (1 - t) from anchor, or d
/// itself when d is closer than that.
inline RDivisor homotopy_step(const MetricGraph& g, const RDivisor& anchor, const RDivisor& d, double r, double t,
                              double kappa) {
  const double reach = kappa * (1.0 - t);
  if (r < reach || r <= 1e-12 * std::max(1.0, d.degree())) return d;
  return t_path_eval(TSegment(g, anchor, d), std::clamp(reach / r, 0.0, 1.0));
}

inline void require_kappa(double r, double kappa) {
  if (!(kappa >= r - 1e-9 * std::max(1.0, r)))
    throw KappaTooSmall("kappa = " + std::to_string(kappa) + " is below the distance " + std::to_string(r));
}

}  // namespace detail

/// h(t, d) of the tropical retraction onto the target.
inline RDivisor retraction_sample(const MetricGraph& g, const ProjectionTarget& target, const RDivisor& d, double t,
                                  double kappa) {
  detail::require_unit_parameter(t);
  if (std::abs(d.degree() - target_degree(target)) > degree_tolerance(target_degree(target)))
    throw DegreeMismatch("divisor degree " + std::to_string(d.degree()) + " vs target degree " +
                         std::to_string(target_degree(target)));
  const RDivisor c = canonical_project(g, target, d);
  const double r = rho(g, d, c);
  detail::require_kappa(r, kappa);
  return detail::homotopy_step(g, c, d, r, t, kappa);
}

/// h(t, d) of the contraction of the hull onto `base`.
inline RDivisor contraction_sample(const MetricGraph& g, const TConvexHull& hull, const RDivisor& base,
                                   const RDivisor& d, double t, double kappa) {
  detail::require_unit_parameter(t);
  if (!hull_contains(g, hull, base)) throw NotInHull("base divisor is not in the hull");
  if (!hull_contains(g, hull, d)) throw NotInHull("divisor is not in the hull");
  const double r = rho(g, base, d);
  detail::require_kappa(r, kappa);
  return detail::homotopy_step(g, base, d, r, t, kappa);
}

}  // namespace divgraph

#endif  // DIVGRAPH_PROJECTION_HPP
