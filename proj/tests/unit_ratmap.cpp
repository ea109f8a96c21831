#include "doctest.h"
#include "generators.hpp"

#include "deckmap/error.hpp"
#include "deckmap/ratmap.hpp"

using namespace deckmap;

namespace {

ComplexPoly Q(std::initializer_list<GaussianRational> c) {
    return ComplexPoly(std::vector<GaussianRational>(c));
}

GaussianRational frac(long p, long q) {
    return GaussianRational(Rational(p, q));
}

RationalMap pair_f() {
    return RationalMap(Q({-2, 0, 2}), Q({-1, 0, 16}));
}

RationalMap pair_g() {
    return RationalMap(Q({-16, 0, 1}), Q({-8, 0, 8}));
}

bool has_point(const std::vector<WeightedPoint>& pts, const SpherePoint& p, std::size_t mult) {
    for (const auto& w : pts) {
        if (w.point.exact && *w.point.exact == p && w.multiplicity == mult) {
            return true;
        }
    }
    return false;
}

// Independent oracle for degree partitions: cluster the roots of the fiber
// polynomial of F = f^k directly; cluster size is the local degree of F.
std::vector<std::size_t> partition_oracle(const RationalMap& f, std::size_t k, const SpherePoint& z) {
    RationalMap F = ratmap_iterate(f, k);
    const std::size_t d = f.degree();
    std::vector<std::size_t> counts(k + 1, 0);
    auto bump = [&](std::size_t local) {
        std::size_t e = 0;
        while (local > 1) {
            local /= d;
            ++e;
        }
        counts[e] += 1;
    };
    ComplexPoly g = z.is_infinity() ? F.den() : F.num() - F.den().scaled(z.value());
    std::size_t finite = 0;
    for (const auto& r : poly_roots<Quad>(g)) {
        bump(r.multiplicity);
        finite += r.multiplicity;
    }
    if (finite < F.degree()) {
        bump(F.degree() - finite);
    }
    return counts;
}

} // namespace

TEST_CASE("ratmap_eval examples") {
    RationalMap f2 = gen::f_a(2);
    CHECK(f2(SpherePoint(0)) == SpherePoint(-1));
    CHECK(f2(SpherePoint::infinity()) == SpherePoint(1));
    CHECK(pair_f()(SpherePoint(1)) == SpherePoint(0));
    CHECK(f2(SpherePoint(GaussianRational(0, 1)) ) == SpherePoint(frac(-3, 1)));
    // pole
    RationalMap inv(Q({1}), Q({0, 1}));
    CHECK(inv(SpherePoint(0)).is_infinity());
    CHECK(inv(SpherePoint::infinity()) == SpherePoint(0));
}

TEST_CASE("canonical scaling and coprimality") {
    RationalMap g = pair_g();
    CHECK(g.den().leading() == GaussianRational(1));
    CHECK(g.degree() == 2);
    // (z^2-1)/(z-1) reduces to z+1
    RationalMap h(Q({-1, 0, 1}), Q({-1, 1}));
    CHECK(h.degree() == 1);
    CHECK(h.num() == Q({1, 1}));
    CHECK_THROWS_AS(RationalMap(Q({1}), ComplexPoly()), Error);
}

TEST_CASE("ratmap_compose examples") {
    RationalMap f = pair_f();
    CHECK(ratmap_compose(f, RationalMap::identity()) == f);
    CHECK(ratmap_compose(RationalMap::identity(), f) == f);
    RationalMap ff = ratmap_compose(f, f);
    RationalMap expect_f(Q({-2, 0, -16, 0, 168}), Q({-21, 0, 32, 0, 64}));
    CHECK(ff == expect_f);
    RationalMap gg = ratmap_compose(pair_g(), pair_g());
    RationalMap expect_g(Q({256, 0, -672, 0, 341}), Q({-512, 0, -256, 0, 168}));
    CHECK(gg == expect_g);
}

TEST_CASE("ratmap_iterate examples") {
    RationalMap f = pair_f();
    CHECK(ratmap_iterate(f, 1) == f);
    CHECK(ratmap_iterate(gen::power_map(2), 3) == gen::power_map(8));
    CHECK_THROWS_AS(ratmap_iterate(f, 0), Error);
    try {
        ratmap_iterate(gen::power_map(2), 9);
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegreeOverflow);
    }
    CHECK(ratmap_iterate(gen::power_map(2), 9, 512).degree() == 512);
}

TEST_CASE("odd-degree fourth iterates agree") {
    RationalMap f(Q({-1, 0, 0, 1}), Q({1, 0, 0, 1}));
    RationalMap g(Q({1, 0, 0, -1}), Q({1, 0, 0, 1}));
    CHECK_FALSE(ratmap_equal(ratmap_iterate(f, 2), ratmap_iterate(g, 2)));
    CHECK(ratmap_equal(ratmap_iterate(f, 4), ratmap_iterate(g, 4)));
}

TEST_CASE("ratmap_equal examples") {
    RationalMap f = pair_f();
    CHECK(ratmap_equal(f, f));
    CHECK_FALSE(ratmap_equal(ratmap_iterate(f, 2), ratmap_iterate(pair_g(), 2)));
    RationalMap fc = gen::f_sigma(frac(3, 5));
    RationalMap fmc = gen::f_sigma(frac(-3, 5));
    CHECK(ratmap_equal(ratmap_iterate(fc, 2), ratmap_iterate(fmc, 2)));
    CHECK_FALSE(ratmap_equal(fc, fmc));
}

TEST_CASE("critical_data examples") {
    for (long a : {2L, -3L, 5L}) {
        CriticalData cd = critical_data(gen::f_a(a));
        REQUIRE(cd.points.size() == 2);
        CHECK(cd.exact);
        CHECK(cd.bicritical);
        CHECK(has_point(cd.points, SpherePoint(0), 1));
        CHECK(has_point(cd.points, SpherePoint::infinity(), 1));
        CHECK(same_point_set(cd.values, {PointValue(SpherePoint(-1)), PointValue(SpherePoint(1))}));
        REQUIRE(cd.critically_coalescing.has_value());
        CHECK(*cd.critically_coalescing);
        CHECK_FALSE(cd.power_map);
    }
    CriticalData sq = critical_data(gen::power_map(2));
    CHECK(sq.power_map);
    CHECK(same_point_set(sq.point_set(), {PointValue(SpherePoint(0)), PointValue(SpherePoint::infinity())}));

    CriticalData pf = critical_data(pair_f());
    CHECK(same_point_set(pf.point_set(), {PointValue(SpherePoint(0)), PointValue(SpherePoint::infinity())}));
    // f(0) = (-2)/(-1) = 2 and f(inf) = 2/16; -2 is not a critical value
    CHECK(same_point_set(pf.values, {PointValue(SpherePoint(2)), PointValue(SpherePoint(frac(1, 8)))}));
    CHECK(pair_f()(SpherePoint(0)) == SpherePoint(2));
    CHECK_FALSE(*pf.critically_coalescing);

    CHECK_THROWS_AS(critical_data(RationalMap::identity()), Error);
}

TEST_CASE("critical multiplicities sum to 2d-2") {
    gen::Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        RationalMap f = gen::bicritical(rng, static_cast<std::size_t>(gen::uniform(rng, 2, 4)));
        CriticalData cd = critical_data(f);
        std::size_t total = 0;
        for (const auto& p : cd.points) {
            total += p.multiplicity;
            CHECK(p.multiplicity == f.degree() - 1);
        }
        CHECK(total == 2 * f.degree() - 2);
        CHECK(cd.bicritical);
        CHECK(cd.exact);
    }
    // a non-bicritical cubic: z^3 - 3z has critical points +-1 and infinity
    RationalMap cubic(Q({0, -3, 0, 1}), Q({1}));
    CriticalData cd = critical_data(cubic);
    CHECK(cd.points.size() == 3);
    CHECK_FALSE(cd.bicritical);
    CHECK(has_point(cd.points, SpherePoint::infinity(), 2));
}

TEST_CASE("irrational critical points fall back to numeric") {
    // z^3 - 6z: critical points +-sqrt(2)
    RationalMap cubic(Q({0, -6, 0, 1}), Q({1}));
    CriticalData cd = critical_data(cubic);
    CHECK_FALSE(cd.exact);
    std::size_t numeric = 0;
    for (const auto& p : cd.points) {
        if (!p.point.is_exact()) {
            ++numeric;
            CHECK(std::abs(std::abs(p.point.approx.z.re) - std::sqrt(2.0)) < 1e-12);
        }
    }
    CHECK(numeric == 2);
}

TEST_CASE("fiber examples") {
    auto f1 = fiber(gen::power_map(2), SpherePoint(1));
    CHECK(f1.size() == 2);
    CHECK(has_point(f1, SpherePoint(1), 1));
    CHECK(has_point(f1, SpherePoint(-1), 1));
    auto f0 = fiber(gen::power_map(2), SpherePoint(0));
    CHECK(f0.size() == 1);
    CHECK(has_point(f0, SpherePoint(0), 2));
    auto fa = fiber(gen::f_a(2), SpherePoint(-1));
    CHECK(fa.size() == 1);
    CHECK(has_point(fa, SpherePoint(0), 2));
    auto finf = fiber(gen::f_a(2), SpherePoint(1));
    CHECK(has_point(finf, SpherePoint::infinity(), 2));
    try {
        fiber(gen::power_map(2), SpherePoint(2));
        FAIL("expected not-representable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotRepresentable);
    }
    auto numeric = fiber(gen::power_map(2), SpherePoint(2), Mode::Numeric);
    CHECK(numeric.size() == 2);
}

TEST_CASE("fiber size property") {
    gen::Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        RationalMap f(gen::poly(rng, 4), gen::poly(rng, 4) + ComplexPoly::monomial(1, 3));
        if (f.degree() < 1) {
            continue;
        }
        for (int s = 0; s < 20; ++s) {
            SpherePoint w = s == 0 ? SpherePoint::infinity() : SpherePoint(gen::gaussian(rng));
            std::size_t total = 0;
            for (const auto& p : fiber(f, w, Mode::Numeric)) {
                total += p.multiplicity;
            }
            CHECK(total == f.degree());
        }
    }
}

TEST_CASE("local_degree examples") {
    CHECK(local_degree(gen::power_map(2), SpherePoint(0)) == 2);
    CHECK(local_degree(gen::power_map(2), SpherePoint(1)) == 1);
    CHECK(local_degree(gen::f_a(2), SpherePoint::infinity()) == 2);
    CHECK(local_degree(gen::power_map(3), SpherePoint::infinity()) == 3);
}

TEST_CASE("composition degree property") {
    gen::Rng rng(43);
    for (int t = 0; t < 50; ++t) {
        RationalMap f = gen::bicritical(rng, static_cast<std::size_t>(gen::uniform(rng, 2, 3)), true);
        RationalMap g = gen::bicritical(rng, static_cast<std::size_t>(gen::uniform(rng, 2, 3)), true);
        RationalMap h = ratmap_compose(f, g);
        CHECK(h.degree() == f.degree() * g.degree());
        CHECK(poly_gcd(h.num(), h.den()).degree() == 0U);
        GaussianRational z = gen::gaussian(rng);
        CHECK(h(SpherePoint(z)) == f(g(SpherePoint(z))));
    }
}

TEST_CASE("degree_partition examples") {
    auto p1 = degree_partition(gen::power_map(2), 2, SpherePoint(3));
    CHECK(p1.counts == std::vector<std::size_t>{4, 0, 0});
    auto p2 = degree_partition(gen::power_map(2), 2, SpherePoint(0));
    CHECK(p2.counts == std::vector<std::size_t>{0, 0, 1});
    RationalMap f2 = gen::f_a(2);
    SpherePoint z = f2(f2(SpherePoint(0)));
    CHECK(z == SpherePoint(frac(-1, 3)));
    auto p3 = degree_partition(f2, 2, z);
    CHECK(p3.counts == partition_oracle(f2, 2, z));
    CHECK(p3.counts[1] == 2);
    RationalMap cubic(Q({0, -3, 0, 1}), Q({1}));
    CHECK_THROWS_AS(degree_partition(cubic, 2, SpherePoint(1)), Error);
}

TEST_CASE("degree partition identity") {
    gen::Rng rng(47);
    for (int t = 0; t < 6; ++t) {
        std::size_t d = static_cast<std::size_t>(gen::uniform(rng, 2, 3));
        RationalMap f = gen::bicritical(rng, d);
        std::size_t kmax = d == 2 ? 3 : 2;
        for (std::size_t k = 1; k <= kmax; ++k) {
            CriticalData cd = critical_data(f);
            std::vector<SpherePoint> bases{SpherePoint(gen::gaussian(rng))};
            for (const auto& v : cd.values) {
                bases.push_back(*v.exact);
            }
            while (bases.size() < 10) {
                bases.push_back(SpherePoint(gen::gaussian(rng, 4, 3)));
            }
            for (const auto& w : bases) {
                auto p = degree_partition(f, k, w);
                std::size_t dk = 1;
                for (std::size_t i = 0; i < k; ++i) {
                    dk *= d;
                }
                CHECK(p.weighted_total() == dk);
                if (k == 2) {
                    CHECK(p.counts == partition_oracle(f, k, w));
                }
            }
        }
    }
}

TEST_CASE("postcritical_orbit examples") {
    auto sq = postcritical_orbit(gen::power_map(2));
    CHECK(sq.postcritically_finite);
    REQUIRE(sq.orbits.size() == 2);
    CHECK(*sq.orbits[0].period == 1);
    CHECK(*sq.orbits[0].steps_to_fixed == 0);
    // 0 and inf are distinct fixed points, so there is no common alpha
    CHECK_FALSE(sq.alpha);

    auto f1 = postcritical_orbit(gen::f_a(1));
    CHECK(f1.postcritically_finite);
    CHECK_FALSE(f1.alpha);
    // 0 -> -1 -> 0 and inf -> 1 -> 0 -> -1 -> 0
    CHECK(*f1.orbits[0].period == 2);
    CHECK(*f1.orbits[0].preperiod == 0);
    CHECK(*f1.orbits[1].preperiod == 2);

    auto f2 = postcritical_orbit(gen::f_a(2), 20);
    CHECK_FALSE(f2.postcritically_finite);
    CHECK(f2.orbits[0].orbit.size() >= 4);
    CHECK(*f2.orbits[0].orbit[2].exact == SpherePoint(frac(-1, 3)));
    CHECK(*f2.orbits[0].orbit[3].exact == SpherePoint(frac(-17, 19)));

    // f_i: -1 -> -i -> i fixed, so m = 2
    auto fi = postcritical_orbit(gen::f_a(GaussianRational::i()));
    CHECK(fi.postcritically_finite);
    REQUIRE(fi.m);
    CHECK(*fi.m == 2);
    CHECK(*fi.alpha->exact == SpherePoint(GaussianRational::i()));
}
