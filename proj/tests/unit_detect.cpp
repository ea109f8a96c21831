#include "doctest.h"
#include "generators.hpp"

#include "deckmap/detect.hpp"
#include "deckmap/error.hpp"
#include "deckmap/parse.hpp"

#include <cmath>

using namespace deckmap;

namespace {

std::vector<PointValue> pts(const std::array<PointValue, 2>& a) {
    return {a[0], a[1]};
}

std::vector<PointValue> exact_set(std::initializer_list<SpherePoint> list) {
    return {list.begin(), list.end()};
}

GaussianRational q(long n, long d = 1) {
    return {Rational(n, d), Rational(0)};
}

MobiusTransform M(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d) {
    return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

RationalMap random_quadratic(gen::Rng& rng) {
    for (;;) {
        RationalMap f = gen::bicritical(rng, 2);
        CriticalData cd = critical_data(f);
        if (cd.bicritical && !cd.power_map) {
            return f;
        }
    }
}

/// f_a for rational a outside {0, +-1} whose critical orbit avoids fixed points early.
RationalMap non_pcf_coalescing(gen::Rng& rng) {
    for (;;) {
        GaussianRational a = gen::nonzero_gaussian(rng, 7, 3, false);
        if (a == q(1) || a == q(-1)) {
            continue;
        }
        RationalMap f = gen::f_a(a);
        if (!postcritical_orbit(f, 12).postcritically_finite) {
            return f;
        }
    }
}

void check_round_trip(const RationalMap& f, const DetectionReport& r) {
    CriticalData cd = critical_data(f);
    CAPTURE(f.to_string());
    CAPTURE(to_string(r.case_label));
    CHECK(same_point_set(pts(r.critical_points), cd.point_set(), 1e-9));
    CHECK(same_point_set(pts(r.critical_values), cd.value_set(), 1e-9));
    if (cd.exact) {
        for (const auto& p : r.critical_points) {
            CHECK(p.is_exact());
        }
    }
}

} // namespace

TEST_CASE("DetectionCase labels") {
    CHECK(to_string(DetectionCase::HigherDegree) == "higher-degree");
    CHECK(to_string(DetectionCase::QuadraticCyclic) == "quadratic-cyclic");
    CHECK(to_string(DetectionCase::QuadraticPower) == "quadratic-power");
    CHECK(to_string(DetectionCase::V4NoFixedPoint) == "V4-no-fixed-point");
    CHECK(to_string(DetectionCase::V4FixedPointM2CrossRatio) == "V4-fixed-point-m2-crossratio");
    CHECK(to_string(DetectionCase::V4FixedPointMGt2Counts) == "V4-fixed-point-m-gt-2-counts");
    CHECK(to_string(DetectionCase::D8PowerLike) == "D8-power-like");
}

TEST_CASE("cross_ratio examples") {
    CrossRatio cr = cross_ratio(SpherePoint(0), SpherePoint::infinity(), SpherePoint(1), SpherePoint(-1));
    CHECK(cr.exact);
    CHECK(cr.equals_minus_one);
    CHECK(cr.in_lattes_set());

    NumPoint<double> root{{3.0 + 2.0 * std::sqrt(2.0), 0.0}, false};
    CrossRatio cr2 = cross_ratio(SpherePoint(0), SpherePoint::infinity(), SpherePoint(1), PointValue(root));
    CHECK_FALSE(cr2.exact);
    CHECK(cr2.root_of_x2_6x_1);
    CHECK_FALSE(cr2.equals_minus_one);

    CrossRatio cr3 = cross_ratio(SpherePoint(0), SpherePoint::infinity(), SpherePoint(1), SpherePoint(5));
    CHECK_FALSE(cr3.in_lattes_set());
    CHECK(cr3.value.exact == SpherePoint(5));

    CHECK_THROWS_AS(cross_ratio(SpherePoint(0), SpherePoint(0), SpherePoint(1), SpherePoint(2)), Error);
}

TEST_CASE("cross_ratio is Mobius invariant") {
    gen::Rng rng(81);
    int done = 0;
    while (done < 50) {
        std::array<SpherePoint, 4> p;
        for (auto& x : p) {
            x = SpherePoint(gen::gaussian(rng, 6, 3));
        }
        if (p[0] == p[1] || p[0] == p[2] || p[1] == p[2]) {
            continue;
        }
        MobiusTransform phi = gen::mobius(rng, 3, true);
        RationalMap pm = phi.to_map();
        CrossRatio before = cross_ratio(p[0], p[1], p[2], p[3]);
        CrossRatio after = cross_ratio(ratmap_eval(pm, p[0]), ratmap_eval(pm, p[1]), ratmap_eval(pm, p[2]),
                                       ratmap_eval(pm, p[3]));
        REQUIRE(before.exact);
        REQUIRE(after.exact);
        CHECK(*before.value.exact == *after.value.exact);
        ++done;
    }
}

TEST_CASE("count_critical_in_fiber examples") {
    RationalMap z4 = gen::power_map(4);
    CHECK(count_critical_in_fiber(z4, SpherePoint(0)) == 1);
    CHECK(count_critical_in_fiber(z4, SpherePoint(5)) == 0);
    // f_2^2 over v1 = -1: the fiber is f^{-1}(0) = {+-sqrt 2}, both critical
    RationalMap F = ratmap_iterate(gen::f_a(2), 2);
    CHECK(count_critical_in_fiber(F, SpherePoint(-1)) == 2);
}

TEST_CASE("all critical fibers of coalescing second iterates") {
    gen::Rng rng(82);
    for (int t = 0; t < 6; ++t) {
        RationalMap f = gen::coalescing(rng);
        CriticalData cd = critical_data(f);
        REQUIRE(cd.critically_coalescing == true);
        RationalMap F = ratmap_iterate(f, 2);
        std::vector<PointValue> X = all_critical_fibers(F, critical_data(F));
        std::vector<PointValue> expected = cd.value_set();
        expected.push_back(ratmap_eval(f, cd.values[0]));
        CHECK(X.size() == 3);
        CHECK(same_point_set(X, expected, 0.0));
        for (const auto& x : X) {
            CHECK(x.is_exact());
        }
    }
}

TEST_CASE("critical counts on coalescing maps that are not PCF") {
    gen::Rng rng(83);
    for (int t = 0; t < 3; ++t) {
        RationalMap f = non_pcf_coalescing(rng);
        CriticalData cd = critical_data(f);
        PointValue beta1 = ratmap_eval(f, cd.values[0]);
        for (std::size_t k = 2; k <= 4; ++k) {
            CAPTURE(k);
            RationalMap F = ratmap_iterate(f, k);
            CriticalData cF = critical_data(F);
            std::size_t total = 0;
            for (const auto& v : cF.value_set()) {
                total += count_critical_in_fiber(F, cF, v);
            }
            CHECK(total == (std::size_t{1} << (k + 1)) - 2);
            CHECK(cF.points.size() == total);
            for (const auto& x : {cd.values[0], cd.values[1], beta1}) {
                CHECK(count_critical_in_fiber(F, cF, x) == std::size_t{1} << (k - 1));
            }
        }
    }
}

TEST_CASE("postcritical_set examples") {
    RationalMap f = gen::f_a(1);
    auto P = postcritical_set(f, critical_data(f));
    REQUIRE(P.has_value());
    CHECK(same_point_set(*P, exact_set({0, 1, -1})));
    RationalMap g = gen::f_a(q(3, 2));
    CHECK_FALSE(postcritical_set(g, critical_data(g), 8).has_value());
}

TEST_CASE("detect higher degree examples") {
    RationalMap h(ComplexPoly({-1, 0, 0, 1}), ComplexPoly({1, 0, 0, 1}));
    DetectionReport r = detect_higher_degree(ratmap_iterate(h, 2), 3, 2);
    CHECK(r.case_label == DetectionCase::HigherDegree);
    CHECK(same_point_set(pts(r.critical_points), exact_set({0, SpherePoint::infinity()}), 0.0));
    CHECK(same_point_set(pts(r.critical_values), exact_set({-1, 1}), 0.0));
    CHECK(r.evidence.deck_iso.kind == GroupKind::Cyclic);
    CHECK(r.evidence.deck_iso.order == 3);

    DetectionReport p = detect_higher_degree(gen::power_map(9), 3, 2);
    CHECK(same_point_set(pts(p.critical_points), exact_set({0, SpherePoint::infinity()}), 0.0));
    CHECK(same_point_set(pts(p.critical_values), exact_set({0, SpherePoint::infinity()}), 0.0));

    CHECK_THROWS_AS(detect_higher_degree(gen::power_map(8), 3, 2), Error);
}

TEST_CASE("cubic with clustered critical points of the iterate") {
    RationalMap f = parse_map("(z^3 + 3*z^2 + 3*z + 55/54)/(z^3 + 3*z^2 + 3*z + 26/27)");
    RationalMap F = ratmap_iterate(f, 2);
    CriticalData cd = critical_data(F, Mode::Exact);
    CHECK(cd.value_set().size() == 4);
    CHECK(same_point_set(all_critical_fibers(F, cd), exact_set({SpherePoint(GaussianRational(Rational(-1, 2), 0)), 1}), 0.0));
    DetectionReport r = detect_higher_degree(F, 3, 2);
    CHECK(same_point_set(pts(r.critical_points), exact_set({-1, SpherePoint::infinity()}), 0.0));
}

TEST_CASE("detect quadratic examples") {
    SUBCASE("power map") {
        DetectionReport r = detect_quadratic(gen::power_map(8), 3);
        CHECK(r.case_label == DetectionCase::QuadraticPower);
        CHECK(same_point_set(pts(r.critical_points), exact_set({0, SpherePoint::infinity()}), 0.0));
    }
    SUBCASE("non-coalescing") {
        RationalMap f = gen::f_sigma(q(3, 5));
        DetectionReport r = detect_quadratic(ratmap_iterate(f, 2), 2);
        CHECK(r.case_label == DetectionCase::QuadraticCyclic);
        CHECK(same_point_set(pts(r.critical_points), exact_set({1, -1}), 0.0));
        CHECK(same_point_set(pts(r.critical_values), exact_set({q(6, 5), q(-6, 5)}), 0.0));
    }
    SUBCASE("V4 without fixed point") {
        for (std::size_t k = 2; k <= 3; ++k) {
            DetectionReport r = detect_quadratic(ratmap_iterate(gen::f_a(2), k), k);
            CHECK(r.case_label == DetectionCase::V4NoFixedPoint);
            CHECK(same_point_set(pts(r.critical_points), exact_set({0, SpherePoint::infinity()}), 0.0));
            CHECK(same_point_set(pts(r.critical_values), exact_set({1, -1}), 0.0));
        }
    }
    SUBCASE("D8 for f_1") {
        DetectionReport r = detect_quadratic(ratmap_iterate(gen::f_a(1), 3), 3);
        CHECK(r.case_label == DetectionCase::D8PowerLike);
        CHECK(same_point_set(pts(r.critical_points), exact_set({0, SpherePoint::infinity()}), 0.0));
        CHECK(same_point_set(pts(r.critical_values), exact_set({1, -1}), 0.0));
    }
    SUBCASE("m = 2 fixed point, cross-ratio -1") {
        // f_i: -1 -> -i -> i, and i is fixed
        RationalMap f = gen::f_a(GaussianRational(0, 1));
        for (std::size_t k : {2, 4}) {
            DetectionReport r = detect_quadratic(ratmap_iterate(f, k), k);
            CHECK(r.case_label == DetectionCase::V4FixedPointM2CrossRatio);
            REQUIRE(r.evidence.m.has_value());
            CHECK(*r.evidence.m == 2);
            REQUIRE(r.evidence.cross_ratio.has_value());
            CHECK(r.evidence.cross_ratio->equals_minus_one);
            check_round_trip(f, r);
        }
    }
}

TEST_CASE("quadratic detection round trip") {
    gen::Rng rng(84);
    int coalescing = 0;
    for (int t = 0; t < 20; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : random_quadratic(rng);
        coalescing += critical_data(f).critically_coalescing == true ? 1 : 0;
        DetectionReport r = detect_quadratic(ratmap_iterate(f, 2), 2);
        check_round_trip(f, r);
    }
    CHECK(coalescing >= 5);
}

TEST_CASE("cubic detection round trip") {
    gen::Rng rng(85);
    for (int t = 0; t < 10; ++t) {
        RationalMap f = gen::bicritical(rng, 3, t % 2 == 1);
        DetectionReport r = detect_higher_degree(ratmap_iterate(f, 2), 3, 2);
        check_round_trip(f, r);
    }
}

TEST_CASE("detection is conjugation equivariant") {
    gen::Rng rng(86);
    for (int t = 0; t < 4; ++t) {
        RationalMap f = gen::coalescing(rng);
        MobiusTransform phi = gen::mobius(rng, 2);
        RationalMap g = conjugate(f, phi);
        DetectionReport rf = detect_quadratic(ratmap_iterate(f, 2), 2);
        DetectionReport rg = detect_quadratic(ratmap_iterate(g, 2), 2);
        CHECK(rf.case_label == rg.case_label);
        check_round_trip(g, rg);
    }
}

TEST_CASE("mobius_factor examples") {
    RationalMap fc = gen::f_sigma(q(3, 5));
    CHECK(mobius_factor(fc, fc).is_identity());
    CHECK(mobius_factor(fc, gen::f_sigma(q(-3, 5))) == M(-1, 0, 0, 1));

    RationalMap f(ComplexPoly({-2, 0, 2}), ComplexPoly({-1, 0, 16}));
    RationalMap g(ComplexPoly({-16, 0, 1}), ComplexPoly({-8, 0, 8}));
    MobiusTransform mu = mobius_factor(f, g);
    CHECK(ratmap_equal(ratmap_compose(mu.to_map(), f), g));
    std::vector<PointValue> image;
    for (const auto& v : critical_data(f).value_set()) {
        image.push_back(ratmap_eval(mu.to_map(), v));
    }
    CHECK(same_point_set(image, critical_data(g).value_set(), 0.0));

    CHECK_THROWS_AS(mobius_factor(fc, gen::f_a(2)), Error);
}

TEST_CASE("mobius_factor with irrational critical points") {
    // C = {+-sqrt 2} for both
    RationalMap f(ComplexPoly({2, 0, 1}), ComplexPoly({0, 1}));
    RationalMap g = ratmap_compose(M(1, 3, 2, 1).to_map(), f);
    MobiusTransform mu = mobius_factor(f, g);
    CHECK(mu == M(1, 3, 2, 1));
}

TEST_CASE("shared_iterate_analysis examples") {
    SUBCASE("odd degree, fourth iterate") {
        RationalMap f(ComplexPoly({-1, 0, 0, 1}), ComplexPoly({1, 0, 0, 1}));
        RationalMap g(ComplexPoly({1, 0, 0, -1}), ComplexPoly({1, 0, 0, 1}));
        SharedIterateReport r = shared_iterate_analysis(f, g, 4);
        CHECK(r.minimal_k == std::optional<std::size_t>(4));
        CHECK_FALSE(r.second_iterate_equal);
        CHECK(r.cv_cp_agree);
        CHECK_FALSE(r.agreement_violation);
    }
    SUBCASE("no shared iterate") {
        RationalMap f(ComplexPoly({-2, 0, 2}), ComplexPoly({-1, 0, 16}));
        RationalMap g(ComplexPoly({-16, 0, 1}), ComplexPoly({-8, 0, 8}));
        SharedIterateReport r = shared_iterate_analysis(f, g, 4);
        CHECK_FALSE(r.minimal_k.has_value());
        CHECK(r.cv_cp_agree);
        CHECK(same_point_set(r.critical_values_f, exact_set({q(1, 8), 2}), 0.0));
    }
    SUBCASE("degree cap") {
        CHECK_THROWS_AS(shared_iterate_analysis(gen::power_map(3), gen::power_map(3), 6, 256), Error);
    }
}

TEST_CASE("f_c and f_-c share the second iterate") {
    gen::Rng rng(87);
    for (int t = 0; t < 10; ++t) {
        GaussianRational c = gen::nonzero_gaussian(rng, 9, 7, t % 3 == 0);
        RationalMap f = gen::f_sigma(c), g = gen::f_sigma(-c);
        SharedIterateReport r = shared_iterate_analysis(f, g, 3);
        CAPTURE(c.to_string());
        CHECK(r.minimal_k == std::optional<std::size_t>(2));
        CHECK(r.second_iterate_equal);
        CHECK(r.cv_cp_agree);
        REQUIRE(r.involution_mu.has_value());
        CHECK(*r.involution_mu == M(-1, 0, 0, 1));
        CHECK(r.mu_is_involution);
        CHECK(r.mu_commutes_with_f);
        CHECK(r.mu_transposes_critical_values);
        CHECK(r.symmetry_locus_member);
    }
}

TEST_CASE("shared iterate implies equal critical data") {
    gen::Rng rng(88);
    for (int t = 0; t < 8; ++t) {
        RationalMap f = gen::bicritical(rng, 2);
        // g = mu o f for mu in Aut(f) shares f^2 when mu commutes with f
        RationalMap g = t % 2 ? f : gen::bicritical(rng, 2);
        SharedIterateReport r = shared_iterate_analysis(f, g, 3);
        if (r.minimal_k) {
            CHECK(r.cv_cp_agree);
            CHECK_FALSE(r.agreement_violation);
        }
    }
}
