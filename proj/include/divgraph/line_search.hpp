#ifndef DIVGRAPH_LINE_SEARCH_HPP
#define DIVGRAPH_LINE_SEARCH_HPP

#include <cmath>
#include <utility>

namespace divgraph {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the minimum of a unimodal function on [a, b].
/// Stops once the bracket is narrower than `tol`.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Uniform grid of `points` samples over [a, b], then golden-section
/// refinement inside the cell pair around the best sample. The best value
/// seen anywhere is returned, so a non-unimodal f degrades to grid accuracy.
template <class F>
ScalarMinimum grid_golden_minimize(F&& f, double a, double b, int points, double tol) {
  ScalarMinimum best{a, f(a)};
  int best_i = 0;
  const double h = (b - a) / (points - 1);
  for (int i = 1; i < points; ++i) {
    const double x = i + 1 == points ? b : a + i * h;
    const double v = f(x);
    if (v < best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  const double lo = best_i == 0 ? a : a + (best_i - 1) * h;
  const double hi = best_i + 1 >= points ? b : a + (best_i + 1) * h;
  ScalarMinimum refined = golden_section_minimize(f, lo, hi, tol);
  if (refined.value < best.value) best = refined;
  return best;
}

}  // namespace divgraph

#endif  // DIVGRAPH_LINE_SEARCH_HPP
