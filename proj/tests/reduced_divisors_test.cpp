#include <gtest/gtest.h>

#include "oracles.hpp"
#include "property_checks.hpp"
#include "test_support.hpp"

using namespace divgraph;
using namespace divgraph::testing;

TEST(ReducedOnSegment, DivisorOnSegmentIsFixed) {
  const MetricGraph c = g_circle();
  const TSegment seg(c, at(c, "v0"), at(c, "v1"));
  const RDivisor e = t_path_eval(seg, 0.3);
  const ReducedResult r = reduced_on_segment(c, seg, e);
  EXPECT_LT(rho(c, r.divisor, e), 1e-9);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_EQ(r.status, ReducedStatus::certified);
}

TEST(ReducedOnSegment, PathClosedForm) {
  const MetricGraph p = g_path();
  const TSegment seg(p, at(p, "v0"), at(p, "e", 0.4, 1.0));
  const ReducedResult r = reduced_on_segment(p, seg, at(p, "v1"));
  EXPECT_LT(rho(p, r.divisor, at(p, "e", 0.4, 1.0)), 1e-8);
  EXPECT_NEAR(r.objective, 0.6 * 0.6 / 2 + 0.6 * 0.4, 1e-9);
  EXPECT_TRUE(r.certificate.certified());
}

TEST(ReducedOnSegment, CircleMatchesGridOracle) {
  const MetricGraph c = g_circle();
  const TSegment seg(c, at(c, "v0"), at(c, "v1"));
  const RDivisor e = at(c, "e0", 0.25, 1.0);
  const ReducedResult r = reduced_on_segment(c, seg, e);
  const oracle::SegmentMinimum o = oracle::segment_minimum(c, seg, e, 0);
  EXPECT_NEAR(segment_parameter(c, seg, r.divisor), o.t, 2e-3);
  EXPECT_LE(r.objective, o.phi + 1e-12);
  EXPECT_EQ(r.status, ReducedStatus::certified);
}

TEST(ReducedOnSegment, Errors) {
  const MetricGraph p = g_path();
  const TSegment seg(p, at(p, "v0"), at(p, "v1"));
  EXPECT_THROW(reduced_on_segment(p, seg, at(p, "v0", 2.0)), DegreeMismatch);
}

TEST(HullContains, Examples) {
  const MetricGraph p = g_path(), c = g_circle();
  const TConvexHull ph({at(p, "v0"), at(p, "v1")});
  EXPECT_TRUE(hull_contains(p, ph, at(p, "v0")));
  EXPECT_TRUE(hull_contains(p, ph, at(p, "e", 0.5, 1.0)));
  const TConvexHull ch({at(c, "v0"), at(c, "v1")});
  EXPECT_FALSE(hull_contains(c, ch, at(c, "e0", 0.25, 1.0)));
  EXPECT_THROW(hull_contains(c, ch, at(c, "v0", 2.0)), DegreeMismatch);
}

TEST(TConvexHull, Invariants) {
  const MetricGraph p = g_path();
  EXPECT_THROW(TConvexHull({}), InvalidRange);
  EXPECT_THROW(TConvexHull({at(p, "v0"), at(p, "v1", 2.0)}), DegreeMismatch);
}

TEST(ReducedOnHull, Examples) {
  const MetricGraph c = g_circle();
  const TConvexHull h({at(c, "v0"), at(c, "v1"), at(c, "e0", 0.1, 1.0)});
  const RDivisor inside = t_path_eval(c, at(c, "v0"), at(c, "v1"), 0.6);
  EXPECT_LT(rho(c, reduced_on_hull(c, h, inside).divisor, inside), 1e-9);
  const TConvexHull same({at(c, "e1", 0.2, 1.0), at(c, "e1", 0.2, 1.0), at(c, "e1", 0.2, 1.0)});
  EXPECT_LT(rho(c, reduced_on_hull(c, same, at(c, "v0")).divisor, at(c, "e1", 0.2, 1.0)), 1e-12);
  const TConvexHull single({at(c, "v1")});
  EXPECT_LT(rho(c, reduced_on_hull(c, single, at(c, "v0")).divisor, at(c, "v1")), 1e-12);
}

TEST(ReducedOnHull, CircleTripleMatchesDoubleGrid) {
  const MetricGraph c = g_circle();
  const TConvexHull h({at(c, "v0"), at(c, "v1"), RDivisor(c, {{c.locate("e0", 0.25), 0.5}, {c.locate("e1", 0.1), 0.5}})});
  Rng rng(51);
  for (int k = 0; k < 3; ++k) {
    const RDivisor e = random_divisor(c, rng, 1.0);
    const ReducedResult r = reduced_on_hull(c, h, e);
    const oracle::TriangleMinimum o = oracle::triangle_minimum(c, h, e);
    EXPECT_LE(r.objective, o.phi + 1e-9);
    EXPECT_NEAR(r.objective, o.phi, 1e-3);
    EXPECT_EQ(r.status, ReducedStatus::certified);
  }
}

TEST(ReducedOnHull, IndependentOfGeneratorOrderAndGrid) {
  Rng rng(52);
  for (int trial = 0; trial < 6; ++trial) {
    auto [g, hull, d] = random_hull(rng);
    const RDivisor e = random_divisor(g, rng, d);
    const RDivisor a = reduced_on_hull(g, hull, e).divisor;
    const TConvexHull permuted({hull.generator(2), hull.generator(0), hull.generator(1)});
    HullSearchOptions coarse;
    coarse.grid = 9;
    coarse.rounds = 4;
    EXPECT_LT(rho(g, a, reduced_on_hull(g, permuted, e, coarse).divisor), 1e-6);
  }
}

TEST(ReducedOnHull, JoinSearchAloneApproachesOptimum) {
  Rng rng(53);
  for (int trial = 0; trial < 4; ++trial) {
    auto [g, hull, d] = random_hull(rng);
    const RDivisor e = random_divisor(g, rng, d);
    HullSearchOptions grid_only;
    grid_only.use_peel = false;
    const ReducedResult exact = reduced_on_hull(g, hull, e);
    const ReducedResult searched = reduced_on_hull(g, hull, e, grid_only);
    EXPECT_GE(searched.objective, exact.objective - 1e-9);
    EXPECT_NEAR(searched.objective, exact.objective, 1e-2 * std::max(1.0, exact.objective));
  }
}

TEST(ReducedOnHull, StrictModeRaisesOnFailedCertificate) {
  // Star with legs a, b, x from the center c. The hull is the tree spanned by
  // a, b and the midpoint of leg x, so E = x reduces to that midpoint. A
  // one-point grid without the peel candidate only searches tconv(a, b).
  const MetricGraph g = build_graph({{"c", "a", "b", "x"},
                                     {{"ca", "c", "a", 1.0}, {"cb", "c", "b", 1.0}, {"cx", "c", "x", 1.0}}});
  const TConvexHull h({at(g, "a"), at(g, "cx", 0.5, 1.0), at(g, "b")});
  HullSearchOptions crude;
  crude.grid = 1;
  crude.rounds = 1;
  crude.use_peel = false;
  const ReducedResult loose = reduced_on_hull(g, h, at(g, "x"), crude);
  EXPECT_EQ(loose.status, ReducedStatus::best_effort);
  EXPECT_LT(rho(g, loose.divisor, at(g, "c")), 1e-9);
  EXPECT_THROW(reduced_on_hull(g, h, at(g, "x"), crude, true), CertificateFailed);
  const ReducedResult exact = reduced_on_hull(g, h, at(g, "x"), HullSearchOptions{}, true);
  EXPECT_LT(rho(g, exact.divisor, at(g, "cx", 0.5, 1.0)), 1e-9);
}

TEST(Extremals, Examples) {
  const MetricGraph p = g_path(), c = g_circle();
  EXPECT_EQ(extremals(c, TConvexHull({at(c, "v0"), at(c, "v0"), at(c, "v0")})).size(), 1U);
  const TConvexHull ex = extremals(p, TConvexHull({at(p, "v0"), at(p, "v1"), at(p, "e", 0.5, 1.0)}));
  ASSERT_EQ(ex.size(), 2U);
  EXPECT_TRUE(divisors_equal(p, ex.generator(0), at(p, "v0")));
  EXPECT_TRUE(divisors_equal(p, ex.generator(1), at(p, "v1")));
  const TConvexHull independent({at(c, "v0"), at(c, "e0", 0.25, 1.0), at(c, "e1", 0.25, 1.0)});
  EXPECT_EQ(extremals(c, independent).size(), 3U);
}

TEST(Certificate, Examples) {
  const MetricGraph p = g_path();
  const TConvexHull seg({at(p, "v0"), at(p, "e", 0.4, 1.0)});
  const CertificateReport ok = reduced_certificate(p, seg, at(p, "e", 0.4, 1.0), at(p, "v1"));
  EXPECT_TRUE(ok.certified());
  EXPECT_LT(std::abs(ok.generators[0].phi_residual), 1e-8);
  for (const auto& c : ok.generators) {
    EXPECT_TRUE(c.gmin_identity);
    EXPECT_TRUE(c.phi_additive);
  }
  const CertificateReport bad = reduced_certificate(p, seg, at(p, "v0"), at(p, "v1"));
  EXPECT_FALSE(bad.all_meet());
  EXPECT_FALSE(bad.certified());
  EXPECT_FALSE(bad.generators[1].phi_additive);
  const RDivisor inside = at(p, "e", 0.3, 1.0);
  EXPECT_TRUE(reduced_certificate(p, seg, inside, inside).certified());
}

TEST(Certificate, RandomSegmentsAndHulls) {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    auto [g, hull, d] = random_hull(rng, trial % 2 == 0 ? 2 : 3);
    const RDivisor e = random_divisor(g, rng, d);
    const ReducedResult r = reduced_on_hull(g, hull, e);
    EXPECT_EQ(r.status, ReducedStatus::certified) << "trial " << trial;
    for (const auto& c : r.certificate.generators) EXPECT_TRUE(c.phi_additive) << c.phi_residual;
  }
}

namespace {

void run_check(std::string (*check)(Rng&), std::uint64_t seed, int count) {
  Rng rng(seed);
  for (int i = 0; i < count; ++i) EXPECT_EQ(check(rng), "") << "configuration " << i;
}

}  // namespace

TEST(ReducedLemmas, RedFiber) { run_check(check_red_fiber, 61, 5); }
TEST(ReducedLemmas, DistDecrease) { run_check(check_dist_decrease, 62, 5); }
TEST(ReducedLemmas, RdSubspace) { run_check(check_rd_subspace, 63, 5); }
TEST(ReducedLemmas, RedOnSubconv) { run_check(check_red_on_subconv, 64, 5); }
TEST(ReducedLemmas, RdOnTsegment) { run_check(check_rd_on_tsegment, 65, 5); }
TEST(ReducedLemmas, RedDistIneq) { run_check(check_red_dist_ineq, 66, 5); }
TEST(ReducedLemmas, TExtension) { run_check(check_textension, 67, 5); }
TEST(ReducedLemmas, LevelSet) { run_check(check_levelset, 68, 5); }
TEST(ReducedLemmas, Rd2Tsegs) {
  Rng rng(69);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(check_rd_2tsegs(rng, i % 2 == 0), "") << "configuration " << i;
}
