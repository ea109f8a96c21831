#include "doctest.h"
#include "generators.hpp"

#include "deckmap/deck.hpp"
#include "deckmap/error.hpp"
#include "deckmap/parse.hpp"

#include <algorithm>
#include <set>

using namespace deckmap;

namespace {

MobiusTransform M(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d) {
    return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

std::vector<MobiusTransform> certified(const MobiusGroup& g) {
    std::vector<MobiusTransform> out;
    for (const auto& e : g.elements) {
        if (e.certified && e.exact) {
            out.push_back(*e.exact);
        }
    }
    return out;
}

bool contains(const std::vector<MobiusTransform>& els, const MobiusTransform& t) {
    return std::any_of(els.begin(), els.end(), [&](const MobiusTransform& e) { return e == t; });
}

bool is_prime(std::size_t n) {
    if (n < 2) {
        return false;
    }
    for (std::size_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            return false;
        }
    }
    return true;
}

void check_census(const MobiusGroup& g, std::size_t d) {
    CHECK_FALSE(g.iso.polyhedral());
    for (const auto& e : g.elements) {
        if (is_prime(e.order)) {
            CHECK_MESSAGE(d % e.order == 0, "element of prime order ", e.order, " with d = ", d);
        }
    }
}

GaussianRational generic_a(gen::Rng& rng) {
    for (;;) {
        GaussianRational a = gen::nonzero_gaussian(rng, 7, 3, false);
        if (!(a == GaussianRational(1)) && !(a == GaussianRational(-1))) {
            return a;
        }
    }
}

/// Quadratic, bicritical, not conjugate to z^2 (critical value sets differ).
RationalMap random_quadratic(gen::Rng& rng) {
    for (;;) {
        RationalMap f = gen::bicritical(rng, 2);
        CriticalData cd = critical_data(f);
        if (cd.bicritical && !cd.power_map) {
            return f;
        }
    }
}

} // namespace

TEST_CASE("deck_base_point sequence") {
    CHECK(deck_base_point(0) == SpherePoint(2));
    CHECK(deck_base_point(1) == SpherePoint(3));
    CHECK(deck_base_point(2) == SpherePoint(GaussianRational(1, 1)));
    CHECK(deck_base_point(3) == SpherePoint(GaussianRational(2, 1)));
    CHECK(deck_base_point(4) == SpherePoint(GaussianRational(Rational(5, 2), 0)));
}

TEST_CASE("is_regular_value examples") {
    RationalMap z2 = gen::power_map(2);
    CHECK(is_regular_value(z2, SpherePoint(2)));
    CHECK_FALSE(is_regular_value(z2, SpherePoint(0)));
    CHECK_FALSE(is_regular_value(z2, SpherePoint::infinity()));
}

TEST_CASE("deck group of f_2 squared") {
    RationalMap f = gen::f_a(2);
    DeckResult dr = deck_group(f, 2);
    CHECK(dr.group.iso.kind == GroupKind::V4);
    CHECK(dr.group.all_certified());
    CHECK(dr.iso_type_confirmed);
    auto els = certified(dr.group);
    REQUIRE(els.size() == 4);
    CHECK(contains(els, M(1, 0, 0, 1)));
    CHECK(contains(els, M(-1, 0, 0, 1)));
    CHECK(contains(els, M(0, 2, 1, 0)));
    CHECK(contains(els, M(0, -2, 1, 0)));
    REQUIRE(dr.special_pairs.has_value());

    auto labeled = special_pairs(dr, f);
    CriticalData cd = critical_data(f);
    std::set<PairLabel> seen;
    for (const auto& lp : labeled) {
        seen.insert(lp.label);
        std::vector<PointValue> pts{lp.pair.points[0], lp.pair.points[1]};
        if (lp.label == PairLabel::CriticalPoints) {
            CHECK(same_point_set(pts, cd.point_set()));
        } else {
            const PointValue& c = cd.points[lp.label == PairLabel::PreimageOfC1 ? 0 : 1].point;
            for (const auto& p : pts) {
                CHECK(same_point(ratmap_eval(f, p), c, 1e-9));
            }
        }
    }
    CHECK(seen.size() == 3);
}

TEST_CASE("special pairs of f_1") {
    RationalMap f = gen::f_a(1);
    DeckResult dr = deck_group(f, 2);
    REQUIRE(dr.group.iso.kind == GroupKind::V4);
    REQUIRE(dr.special_pairs.has_value());
    std::vector<std::vector<PointValue>> expected{
        {SpherePoint(0), SpherePoint::infinity()},
        {SpherePoint(1), SpherePoint(-1)},
        {SpherePoint(GaussianRational(0, 1)), SpherePoint(GaussianRational(0, -1))},
    };
    for (const auto& sp : *dr.special_pairs) {
        std::vector<PointValue> pts{sp.points[0], sp.points[1]};
        CHECK(std::any_of(expected.begin(), expected.end(), [&](const auto& e) { return same_point_set(pts, e); }));
    }
}

TEST_CASE("special_pairs rejects non-V4 groups") {
    RationalMap z2 = gen::power_map(2);
    DeckResult dr = deck_group(z2, 2);
    CHECK_THROWS_AS(special_pairs(dr, z2), Error);
}

TEST_CASE("deck groups of z^2 and f_1") {
    for (std::size_t k = 1; k <= 3; ++k) {
        DeckResult dr = deck_group(gen::power_map(2), k);
        CHECK(dr.group.iso.kind == GroupKind::Cyclic);
        CHECK(dr.group.size() == (std::size_t{1} << k));
        CHECK(dr.iso_type_confirmed);
    }
    DeckResult d8 = deck_group(gen::f_a(1), 3);
    CHECK(d8.group.iso.kind == GroupKind::Dihedral);
    CHECK(d8.group.size() == 8);
}

TEST_CASE("deck elements preserve fibers and local degree") {
    gen::Rng rng(71);
    for (int t = 0; t < 6; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : random_quadratic(rng);
        RationalMap F = ratmap_iterate(f, 2);
        DeckResult dr = deck_group_of(F);
        CriticalData cd = critical_data(F);
        for (const auto& tau : certified(dr.group)) {
            RationalMap tm = tau.to_map();
            for (int s = 0; s < 5; ++s) {
                SpherePoint w = gen::gaussian(rng, 9, 4);
                CHECK(ratmap_eval(F, ratmap_eval(tm, w)) == ratmap_eval(F, w));
            }
            for (const auto& c : cd.points) {
                if (c.point.exact) {
                    SpherePoint image = ratmap_eval(tm, *c.point.exact);
                    CHECK(local_degree(F, image) == local_degree(F, *c.point.exact));
                }
            }
        }
    }
}

TEST_CASE("deck subgroup chain") {
    gen::Rng rng(72);
    for (int t = 0; t < 4; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : gen::bicritical(rng, 2);
        auto base = certified(deck_group(f, 1).group);
        for (std::size_t k = 2; k <= 3; ++k) {
            auto higher = certified(deck_group(f, k).group);
            for (const auto& e : base) {
                CHECK(contains(higher, e));
            }
        }
    }
}

TEST_CASE("cyclic or dihedral, prime orders divide d") {
    gen::Rng rng(73);
    for (std::size_t d = 2; d <= 4; ++d) {
        for (std::size_t k = 1; k <= 2; ++k) {
            if (d == 4 && k == 2) {
                continue;
            }
            for (int t = 0; t < 3; ++t) {
                RationalMap f = gen::bicritical(rng, d);
                DeckResult dr = deck_group(f, k);
                check_census(dr.group, d);
                if (d % 2 == 1) {
                    CHECK(dr.group.iso.kind == GroupKind::Cyclic);
                }
            }
        }
    }
    // Degree 16 iterate, one sample.
    DeckResult dr = deck_group(gen::bicritical(rng, 4), 2);
    check_census(dr.group, 4);
}

TEST_CASE("V4 at k = 2 iff critically coalescing") {
    gen::Rng rng(74);
    int coalescing = 0;
    for (int t = 0; t < 10; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : random_quadratic(rng);
        CriticalData cd = critical_data(f);
        REQUIRE(cd.critically_coalescing.has_value());
        coalescing += *cd.critically_coalescing ? 1 : 0;
        DeckResult dr = deck_group(f, 2);
        CHECK((dr.group.iso.kind == GroupKind::V4) == *cd.critically_coalescing);
    }
    CHECK(coalescing >= 5);
}

TEST_CASE("V4 at some k <= 3 implies V4 at k = 2") {
    gen::Rng rng(75);
    for (int t = 0; t < 4; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : random_quadratic(rng);
        bool v4_k2 = deck_group(f, 2).group.iso.kind == GroupKind::V4;
        bool v4_k3 = deck_group(f, 3).group.iso.kind == GroupKind::V4;
        if (v4_k3) {
            CHECK(v4_k2);
        }
    }
}

TEST_CASE("f_a decks are V4 at k = 2, 3") {
    gen::Rng rng(76);
    for (int t = 0; t < 5; ++t) {
        GaussianRational a = generic_a(rng);
        CAPTURE(a.to_string());
        for (std::size_t k = 2; k <= 3; ++k) {
            DeckResult dr = deck_group(gen::f_a(a), k);
            CHECK(dr.group.iso.kind == GroupKind::V4);
            if (k == 2) {
                auto els = certified(dr.group);
                CHECK(contains(els, M(-1, 0, 0, 1)));
                CHECK(contains(els, M(0, a, 1, 0)));
                CHECK(contains(els, M(0, -a, 1, 0)));
            }
        }
    }
}

TEST_CASE("deck type is conjugation invariant") {
    gen::Rng rng(77);
    for (int t = 0; t < 5; ++t) {
        RationalMap f = t % 2 ? gen::coalescing(rng) : gen::bicritical(rng, 2 + t % 2);
        MobiusTransform phi = gen::mobius(rng, 2);
        RationalMap g = conjugate(f, phi);
        for (std::size_t k = 1; k <= 2; ++k) {
            CHECK(deck_group(f, k).group.iso == deck_group(g, k).group.iso);
        }
    }
}

TEST_CASE("deck results do not depend on worker count") {
    RationalMap f = gen::f_a(GaussianRational(Rational(3, 2), 0));
    DeckOptions one, four;
    one.workers = 1;
    four.workers = 4;
    DeckResult a = deck_group(f, 3, one);
    DeckResult b = deck_group(f, 3, four);
    REQUIRE(a.group.size() == b.group.size());
    for (std::size_t i = 0; i < a.group.size(); ++i) {
        REQUIRE(a.group.elements[i].exact.has_value());
        REQUIRE(b.group.elements[i].exact.has_value());
        CHECK(*a.group.elements[i].exact == *b.group.elements[i].exact);
    }
}

TEST_CASE("aut_group examples") {
    // Aut(z^2) = {z, 1/z}
    MobiusGroup a2 = aut_group(gen::power_map(2));
    CHECK(a2.size() == 2);
    CHECK(contains(certified(a2), M(0, 1, 1, 0)));
    // f_c commutes with -z and 1/z
    MobiusGroup ac = aut_group(gen::f_sigma(GaussianRational(Rational(3, 5), 0)));
    auto els = certified(ac);
    CHECK(contains(els, M(-1, 0, 0, 1)));
    for (const auto& tau : els) {
        RationalMap f = gen::f_sigma(GaussianRational(Rational(3, 5), 0));
        CHECK(ratmap_equal(ratmap_compose(f, tau.to_map()), ratmap_compose(tau.to_map(), f)));
    }
}

TEST_CASE("ill-conditioned cubic iterates keep their rotations") {
    // both conjugate to z^3 with critical points clustered near the pole
    for (const char* src : {"((-13/8)*z^3 + (27/4)*z^2 + (-9)*z + (15/4))/(z^3 + (-9/2)*z^2 + (27/4)*z + (-27/8))",
                            "((-3/2)*z^3 + (9/2)*z^2 + (-9/2)*z + (5/2))/(z^3 + (-3)*z^2 + (3)*z + (-3/2))"}) {
        CAPTURE(src);
        RationalMap f = parse_map(src);
        DeckResult d1 = deck_group(f, 1);
        DeckResult d2 = deck_group(f, 2);
        CHECK(d1.group.iso == IsoType{GroupKind::Cyclic, 3});
        CHECK(d2.group.iso.kind == GroupKind::Cyclic);
        CHECK(d2.group.size() % 3 == 0);
    }
}
