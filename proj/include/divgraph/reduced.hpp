#ifndef DIVGRAPH_REDUCED_HPP
#define DIVGRAPH_REDUCED_HPP

// General reduced divisors in t-segments and finitely generated tropical
// convex hulls: the minimizer of Phi(. - E), hull membership, extremals and
// reducedness certificates.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "divgraph/closed_subset.hpp"
#include "divgraph/divisor.hpp"
#include "divgraph/divisor_space.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/line_search.hpp"
#include "divgraph/potential.hpp"
#include "divgraph/pwl_function.hpp"

namespace divgraph {

class TConvexHull {
 public:
  explicit TConvexHull(std::vector<RDivisor> generators) : generators_(std::move(generators)) {
    if (generators_.empty()) throw InvalidRange("a hull needs at least one generator");
    for (const auto& d : generators_) require_equal_degree(generators_.front(), d);
  }

  const std::vector<RDivisor>& generators() const { return generators_; }
  const RDivisor& generator(std::size_t i) const { return generators_.at(i); }
  std::size_t size() const { return generators_.size(); }
  double degree() const { return generators_.front().degree(); }

  /// Hull of the first k generators.
  TConvexHull prefix(std::size_t k) const {
    return TConvexHull(std::vector<RDivisor>(generators_.begin(), generators_.begin() + static_cast<long>(k)));
  }

 private:
  std::vector<RDivisor> generators_;
};

struct GeneratorCheck {
  bool meets = false;          // Gmin(f_{D-D0}) ∩ Gmin(f_{D0-E}) nonempty
  bool gmin_identity = false;  // Gmin(f_{D-E}) = Gmin(f_{D-D0}) ∩ Gmin(f_{D0-E})
  double phi_residual = 0.0;   // Phi(D-E) - Phi(D-D0) - Phi(D0-E)
  bool phi_additive = false;
};

struct CertificateReport {
  std::vector<GeneratorCheck> generators;
  bool gmin_union_identity = false;  // Gmin(f_{D0-E}) = ∪ Gmin(f_{Di-E})

  bool all_meet() const {
    return std::all_of(generators.begin(), generators.end(), [](const GeneratorCheck& c) { return c.meets; });
  }
  bool certified() const { return all_meet() && gmin_union_identity; }
};

enum class ReducedStatus { certified, best_effort };

inline const char* to_string(ReducedStatus s) { return s == ReducedStatus::certified ? "certified" : "best-effort"; }

struct ReducedResult {
  RDivisor divisor;
  double objective = 0.0;  // Phi(D0 - E)
  CertificateReport certificate;
  ReducedStatus status = ReducedStatus::best_effort;
};

/// Checks a claimed reduced divisor d0 of e against every generator.
inline CertificateReport reduced_certificate(const MetricGraph& g, const TConvexHull& hull, const RDivisor& d0,
                                             const RDivisor& e) {
  require_equal_degree(d0, e);
  require_equal_degree(hull.generator(0), e);
  const double slack = g.tol_cmp();
  const ClosedSubset gmin_d0_e = gmin_of(g, e, d0);
  const double phi_d0_e = s_func(g, e, d0);

  CertificateReport report;
  ClosedSubset united = ClosedSubset::empty(g);
  for (const auto& d : hull.generators()) {
    const PwlFunction f_d_e = associated_function(g, e, d);
    const PwlFunction f_d_d0 = associated_function(g, d0, d);
    const ClosedSubset gmin_d_e = pwl_gmin(f_d_e);
    const ClosedSubset gmin_d_d0 = pwl_gmin(f_d_d0);
    united = subset_union(united, gmin_d_e);

    GeneratorCheck c;
    const ClosedSubset common = subset_intersect(gmin_d_d0, gmin_d0_e);
    c.meets = !common.is_empty() || subsets_meet(subset_expand(gmin_d_d0, slack), gmin_d0_e);
    c.gmin_identity = subset_approx_equal(gmin_d_e, common, slack);
    const double phi_d_e = pwl_integral(f_d_e);
    c.phi_residual = phi_d_e - pwl_integral(f_d_d0) - phi_d0_e;
    c.phi_additive = std::abs(c.phi_residual) <= 1e-8 * std::max(1.0, phi_d_e);
    report.generators.push_back(c);
  }
  report.gmin_union_identity = subset_approx_equal(gmin_d0_e, united, slack);
  return report;
}

/// E ∈ tconv(D1, ..., Dn) iff ∪ Gmin(f_{Di-E}) = Γ.
inline bool hull_contains(const MetricGraph& g, const TConvexHull& hull, const RDivisor& e) {
  require_equal_degree(hull.generator(0), e);
  ClosedSubset united = ClosedSubset::empty(g);
  for (const auto& d : hull.generators()) {
    united = subset_union(united, gmin_of(g, e, d));
    if (subset_covers_gamma(united)) return true;
  }
  return false;
}

namespace detail {

struct SegmentMinimum {
  RDivisor divisor;
  double t = 0.0;
  double phi = 0.0;
};

/// Minimizer of Phi(P(t) - E) on one segment, without certificate.
inline SegmentMinimum minimize_on_segment(const MetricGraph& g, const TSegment& seg, const RDivisor& e) {
  if (seg.is_degenerate()) return {seg.from(), 0.0, s_func(g, e, seg.from())};
  SegmentObjective obj(seg, associated_function(g, e, seg.from()));
  const ScalarMinimum m = obj.minimize();
  return {t_path_eval(seg, m.x), m.x, m.value};
}

inline bool hull_is_degenerate(const MetricGraph& g, const TConvexHull& hull) {
  return std::all_of(hull.generators().begin(), hull.generators().end(),
                     [&](const RDivisor& d) { return divisors_equal(g, hull.generator(0), d); });
}

inline ReducedResult finish(const MetricGraph& g, const TConvexHull& hull, RDivisor d0, const RDivisor& e,
                            bool strict) {
  ReducedResult r;
  r.objective = s_func(g, e, d0);
  r.certificate = reduced_certificate(g, hull, d0, e);
  r.status = r.certificate.certified() ? ReducedStatus::certified : ReducedStatus::best_effort;
  r.divisor = std::move(d0);
  if (strict && r.status != ReducedStatus::certified)
    throw CertificateFailed(std::string("reducedness certificate failed (") +
                            (r.certificate.all_meet() ? "Gmin union identity" : "generator Gmin meet") + ")");
  return r;
}

}  // namespace detail

/// Unique minimizer of Phi(. - E) over a t-segment. The objective along the
/// path is unimodal; the 33-point grid stage guards that assumption.
inline ReducedResult reduced_on_segment(const MetricGraph& g, const TSegment& seg, const RDivisor& e,
                                        bool strict = false) {
  require_segment_degree(seg, e);
  const TConvexHull ends({seg.from(), seg.to()});
  if (segment_contains(g, seg, e)) return detail::finish(g, ends, e, e, strict);
  return detail::finish(g, ends, detail::minimize_on_segment(g, seg, e).divisor, e, strict);
}

struct HullSearchOptions {
  int grid = 17;         // samples per parameter and round
  int rounds = 3;        // refinement rounds
  double shrink = 4.0;   // window shrink factor per round
  bool use_peel = true;  // also evaluate the recursive peel candidate
};

namespace detail {

/// Reduced divisor in hull(D1..Dn) as the segment reduction of E on
/// tconv(T'_E, Dn), T' = hull(D1..Dn-1). T_E lies on that segment because
/// Gmin(f_{T'_F - F}) contains Gmin(f_{D' - F}) for every D' in T'.
inline RDivisor peel_reduce(const MetricGraph& g, const TConvexHull& hull, const RDivisor& e) {
  RDivisor current = hull.generator(0);
  for (std::size_t k = 1; k < hull.size(); ++k)
    current = minimize_on_segment(g, TSegment(g, current, hull.generator(k)), e).divisor;
  return current;
}

/// Nested join search: a point of hull(D1..Dn-1) is reached by walking
/// X1 = D1, Xj = P_{Dj - X(j-1)}(s_j); its value is the minimum of Phi(. - E)
/// on tconv(X(n-1), Dn). The n-2 walk parameters are searched on an adaptive
/// grid.
inline SegmentMinimum join_search(const MetricGraph& g, const TConvexHull& hull, const RDivisor& e,
                                  const HullSearchOptions& opt) {
  const std::size_t n = hull.size();
  const std::size_t dims = n - 2;
  auto evaluate = [&](const std::vector<double>& s) {
    RDivisor x = hull.generator(0);
    for (std::size_t j = 1; j + 1 < n; ++j) x = t_path_eval(TSegment(g, x, hull.generator(j)), s[j - 1]);
    return minimize_on_segment(g, TSegment(g, x, hull.generator(n - 1)), e);
  };

  std::vector<double> lo(dims, 0.0), hi(dims, 1.0), best_s(dims, 0.0);
  SegmentMinimum best = evaluate(best_s);
  for (int round = 0; round < opt.rounds; ++round) {
    std::vector<int> idx(dims, 0);
    std::vector<double> s(dims);
    const std::vector<double> round_best = best_s;
    while (true) {
      for (std::size_t k = 0; k < dims; ++k)
        s[k] = opt.grid > 1 ? lo[k] + (hi[k] - lo[k]) * idx[k] / (opt.grid - 1) : lo[k];
      if (s != round_best) {
        SegmentMinimum m = evaluate(s);
        if (m.phi < best.phi) {
          best = std::move(m);
          best_s = s;
        }
      }
      std::size_t k = 0;
      while (k < dims && ++idx[k] == opt.grid) idx[k++] = 0;
      if (k == dims) break;
    }
    for (std::size_t k = 0; k < dims; ++k) {
      const double half = (hi[k] - lo[k]) / (2.0 * opt.shrink);
      lo[k] = std::max(0.0, best_s[k] - half);
      hi[k] = std::min(1.0, best_s[k] + half);
    }
  }
  return best;
}

}  // namespace detail

/// Minimizer of Phi(. - E) over tconv(D1, ..., Dn).
inline ReducedResult reduced_on_hull(const MetricGraph& g, const TConvexHull& hull, const RDivisor& e,
                                     const HullSearchOptions& opt = {}, bool strict = false) {
  require_equal_degree(hull.generator(0), e);
  if (hull.size() == 1 || detail::hull_is_degenerate(g, hull))
    return detail::finish(g, hull, hull.generator(0), e, strict);
  if (hull_contains(g, hull, e)) return detail::finish(g, hull, e, e, strict);
  if (hull.size() == 2)
    return detail::finish(g, hull,
                          detail::minimize_on_segment(g, TSegment(g, hull.generator(0), hull.generator(1)), e).divisor,
                          e, strict);

  detail::SegmentMinimum best = detail::join_search(g, hull, e, opt);
  if (opt.use_peel) {
    RDivisor peeled = detail::peel_reduce(g, hull, e);
    const double phi = s_func(g, e, peeled);
    if (phi <= best.phi) best = {std::move(peeled), 0.0, phi};
  }
  return detail::finish(g, hull, std::move(best.divisor), e, strict);
}

/// Minimal generating subset: generators lying in the hull of the others are
/// removed one at a time, in input order.
inline TConvexHull extremals(const MetricGraph& g, const TConvexHull& hull) {
  std::vector<RDivisor> gens = hull.generators();
  bool removed = true;
  while (removed && gens.size() > 1) {
    removed = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::vector<RDivisor> others;
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (j != i) others.push_back(gens[j]);
      if (hull_contains(g, TConvexHull(others), gens[i])) {
        gens = std::move(others);
        removed = true;
        break;
      }
    }
  }
  return TConvexHull(std::move(gens));
}

}  // namespace divgraph

#endif  // DIVGRAPH_REDUCED_HPP
