#include "deckmap/detect.hpp"

#include "deckmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deckmap {

std::string to_string(DetectionCase c) {
    switch (c) {
    case DetectionCase::HigherDegree:
        return "higher-degree";
    case DetectionCase::QuadraticCyclic:
        return "quadratic-cyclic";
    case DetectionCase::QuadraticPower:
        return "quadratic-power";
    case DetectionCase::V4NoFixedPoint:
        return "V4-no-fixed-point";
    case DetectionCase::V4FixedPointM2CrossRatio:
        return "V4-fixed-point-m2-crossratio";
    case DetectionCase::V4FixedPointMGt2Counts:
        return "V4-fixed-point-m-gt-2-counts";
    case DetectionCase::D8PowerLike:
        return "D8-power-like";
    }
    return "unknown";
}

namespace {

// Images of numeric points under high iterates lose a few digits.
constexpr double kPointTol = 1e-6;

PointValue apply(const MobiusTransform& t, const PointValue& p) {
    if (p.exact) {
        return PointValue(t(*p.exact));
    }
    return PointValue(NumMobius<double>::from(t)(p.approx));
}

PointValue apply(const GroupElement& e, const PointValue& p) {
    if (e.exact) {
        return apply(*e.exact, p);
    }
    return PointValue(e.approx(p.approx));
}

std::vector<PointValue> fixed_points_of(const GroupElement& e) {
    if (e.exact) {
        return mobius_fixed_points(*e.exact).points;
    }
    std::vector<PointValue> out;
    for (const auto& p : numeric_fixed_points(e.approx)) {
        out.emplace_back(p);
    }
    return out;
}

bool contains(const std::vector<PointValue>& pts, const PointValue& p) {
    return std::any_of(pts.begin(), pts.end(), [&](const PointValue& q) { return same_point(p, q, kPointTol); });
}

bool point_less(const PointValue& a, const PointValue& b) {
    if (a.exact && b.exact) {
        return sphere_less(*a.exact, *b.exact);
    }
    if (a.approx.inf != b.approx.inf) {
        return b.approx.inf;
    }
    if (a.approx.z.re != b.approx.z.re) {
        return a.approx.z.re < b.approx.z.re;
    }
    return a.approx.z.im < b.approx.z.im;
}

std::array<PointValue, 2> ordered(PointValue a, PointValue b) {
    if (point_less(b, a)) {
        std::swap(a, b);
    }
    return {a, b};
}

// Replaces numeric fixed points by the critical points of F they approximate.
std::array<PointValue, 2> match_critical(const std::vector<PointValue>& pts, const CriticalData& crit) {
    if (pts.size() != 2) {
        throw Error(ErrorKind::HypothesisViolation, "expected two fixed points");
    }
    std::array<PointValue, 2> out;
    for (std::size_t i = 0; i < 2; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : crit.points) {
            double dist = chordal(pts[i].approx, c.point.approx);
            if (dist < best) {
                best = dist;
                out[i] = c.point;
            }
        }
        if (best > 1e-4) {
            throw Error(ErrorKind::HypothesisViolation, "deck fixed point is not a critical point of the iterate");
        }
    }
    if (same_point(out[0], out[1], kPointTol)) {
        throw Error(ErrorKind::HypothesisViolation, "deck fixed points collapse to one critical point");
    }
    return ordered(out[0], out[1]);
}

std::array<PointValue, 2> exactly_two(const std::vector<PointValue>& pts, const char* what) {
    if (pts.size() != 2) {
        throw Error(ErrorKind::HypothesisViolation,
                    std::string("expected two ") + what + ", found " + std::to_string(pts.size()));
    }
    return ordered(pts[0], pts[1]);
}

// The two points of X exchanged by mu.
std::array<PointValue, 2> swapped_pair(const GroupElement& mu, const std::vector<PointValue>& X) {
    for (std::size_t i = 0; i < X.size(); ++i) {
        PointValue image = apply(mu, X[i]);
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            if (same_point(image, X[j], kPointTol)) {
                return ordered(X[i], X[j]);
            }
        }
    }
    throw Error(ErrorKind::HypothesisViolation, "involution swaps no pair of all-critical fiber points");
}

std::optional<std::size_t> odd_one_out(const std::vector<PointValue>& images) {
    if (images.size() != 3) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& a = images[(i + 1) % 3];
        const auto& b = images[(i + 2) % 3];
        if (same_point(a, b, kPointTol) && !same_point(images[i], a, kPointTol)) {
            return i;
        }
    }
    return std::nullopt;
}

void check_iterate_degree(const RationalMap& F, std::size_t d, std::size_t k) {
    auto expected = iterate_degree(d, k, std::numeric_limits<std::size_t>::max() / 2);
    if (k == 0 || !expected || F.degree() != *expected) {
        throw Error(ErrorKind::InvalidArgument, "map degree " + std::to_string(F.degree()) + " is not " +
                                                    std::to_string(d) + "^" + std::to_string(k));
    }
}

} // namespace

CrossRatio cross_ratio(const PointValue& v1, const PointValue& v2, const PointValue& a, const PointValue& b,
                       double tol) {
    if (same_point(v1, v2, tol) || same_point(v1, a, tol) || same_point(v2, a, tol)) {
        throw Error(ErrorKind::InvalidArgument, "cross ratio anchors must be distinct");
    }
    CrossRatio out;
    if (v1.exact && v2.exact && a.exact && b.exact) {
        SpherePoint x = MobiusTransform::chart(*v1.exact, *v2.exact, *a.exact)(*b.exact);
        out.value = PointValue(x);
        out.exact = true;
        out.equals_minus_one = x == SpherePoint(-1);
        // 3 +- 2 sqrt 2 is irrational, so no exact value satisfies the quadratic.
        return out;
    }
    NumPoint<double> x = NumMobius<double>::chart(v1.approx, v2.approx, a.approx)(b.approx);
    out.value = PointValue(x);
    if (!x.inf) {
        out.equals_minus_one = (x.z + Complex<double>(1.0)).abs() < tol;
        Complex<double> q = x.z * x.z - Complex<double>(6.0) * x.z + Complex<double>(1.0);
        out.root_of_x2_6x_1 = q.abs() < tol * (1.0 + x.z.norm());
    }
    return out;
}

std::size_t count_critical_in_fiber(const RationalMap& F, const CriticalData& crit, const PointValue& x) {
    (void)F;
    std::size_t n = 0;
    for (const auto& v : crit.values) {
        if (same_point(v, x, kPointTol)) {
            ++n;
        }
    }
    return n;
}

std::size_t count_critical_in_fiber(const RationalMap& F, const PointValue& x) {
    return count_critical_in_fiber(F, critical_data(F, Mode::Exact), x);
}

std::vector<PointValue> all_critical_fibers(const RationalMap& F, const CriticalData& crit) {
    const std::size_t D = F.degree();
    std::vector<PointValue> out;
    for (const auto& x : crit.value_set()) {
        bool all_critical = false;
        if (x.exact) {
            ComplexPoly G = x.exact->is_infinity() ? F.den() : F.num() - F.den().scaled(x.exact->value());
            const std::size_t drop = D - G.degree_or_zero();
            auto factors = squarefree_decomposition(G);
            bool no_simple_roots = factors.empty() || factors[0].degree_or_zero() == 0;
            all_critical = drop != 1 && no_simple_roots;
        } else {
            std::size_t local = 0;
            for (std::size_t i = 0; i < crit.points.size(); ++i) {
                if (same_point(crit.values[i], x, kPointTol)) {
                    local += crit.points[i].multiplicity + 1;
                }
            }
            all_critical = local == D;
        }
        if (all_critical) {
            out.push_back(x);
        }
    }
    return out;
}

std::optional<std::vector<PointValue>> postcritical_set(const RationalMap& F, const CriticalData& crit,
                                                        std::size_t max_points) {
    std::vector<PointValue> pts;
    for (const auto& v : crit.value_set()) {
        if (!contains(pts, v)) {
            pts.push_back(v);
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts.size() > max_points) {
            return std::nullopt;
        }
        PointValue image = ratmap_eval(F, pts[i]);
        if (image.exact && image.exact->is_finite() && image.exact->value().height_bits() > kOrbitHeightCapBits) {
            return std::nullopt;
        }
        if (!contains(pts, image)) {
            pts.push_back(image);
        }
    }
    if (pts.size() > max_points) {
        return std::nullopt;
    }
    return pts;
}

DetectionReport detect_higher_degree(const RationalMap& F, std::size_t d, std::size_t k, const DeckOptions& opts) {
    if (d < 3) {
        throw Error(ErrorKind::InvalidArgument, "higher-degree detection needs d >= 3");
    }
    check_iterate_degree(F, d, k);
    DeckResult dr = deck_group_of(F, opts);
    CriticalData crit = critical_data(F, Mode::Exact);

    DetectionReport rep;
    rep.case_label = DetectionCase::HigherDegree;
    rep.evidence.deck_iso = dr.group.iso;
    rep.evidence.deck_confirmed = dr.iso_type_confirmed;
    for (std::size_t i = 0; i < dr.group.size(); ++i) {
        if (dr.group.elements[i].order >= 3) {
            rep.evidence.deck_element = i;
            break;
        }
    }
    if (!rep.evidence.deck_element) {
        throw Error(ErrorKind::HypothesisViolation, "deck group has no element of order >= 3");
    }
    rep.critical_points = match_critical(fixed_points_of(dr.group.elements[*rep.evidence.deck_element]), crit);
    rep.evidence.all_critical_fibers = all_critical_fibers(F, crit);
    rep.critical_values = exactly_two(rep.evidence.all_critical_fibers, "all-critical fibers");
    return rep;
}

namespace {

std::size_t involution_with_fixed_set(const DeckResult& dr, std::size_t pair_index) {
    return (*dr.special_pairs)[pair_index].involution;
}

// Decides the special pair through the images of the pairs and of X. Returns
// nullopt when the images do not separate the pairs.
std::optional<std::size_t> route_by_images(const RationalMap& F, const DeckResult& dr, const std::vector<PointValue>& X,
                                           DetectionEvidence& ev) {
    const auto& pairs = *dr.special_pairs;
    ev.special_pair_images.clear();
    for (const auto& p : pairs) {
        ev.special_pair_images.push_back(ratmap_eval(F, p.points[0]));
    }
    const auto& img = ev.special_pair_images;
    if (auto odd = odd_one_out(img)) {
        return odd;
    }
    bool all_distinct = !same_point(img[0], img[1], kPointTol) && !same_point(img[0], img[2], kPointTol) &&
                        !same_point(img[1], img[2], kPointTol);
    if (!all_distinct || X.size() != 3) {
        return std::nullopt;
    }
    // Two points of X share their image; the third one is f(v1), which the
    // critical pair maps to.
    std::vector<PointValue> x_images;
    for (const auto& x : X) {
        x_images.push_back(ratmap_eval(F, x));
    }
    auto w = odd_one_out(x_images);
    if (!w) {
        return std::nullopt;
    }
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < 3; ++i) {
        if (same_point(img[i], X[*w], kPointTol)) {
            if (hit) {
                return std::nullopt;
            }
            hit = i;
        }
    }
    return hit;
}

} // namespace

DetectionReport detect_quadratic(const RationalMap& F, std::size_t k, const DeckOptions& opts) {
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, "quadratic detection needs k >= 2");
    }
    check_iterate_degree(F, 2, k);
    DeckResult dr = deck_group_of(F, opts);
    CriticalData crit = critical_data(F, Mode::Exact);
    const auto& G = dr.group;

    DetectionReport rep;
    auto& ev = rep.evidence;
    ev.deck_iso = G.iso;
    ev.deck_confirmed = dr.iso_type_confirmed;
    ev.all_critical_fibers = all_critical_fibers(F, crit);
    const auto& X = ev.all_critical_fibers;

    if (G.iso.kind == GroupKind::Cyclic && G.iso.order >= 2) {
        // Canonical order puts a generator last.
        const std::size_t gen = G.size() - 1;
        ev.deck_element = gen;
        rep.case_label = G.iso.order > 2 ? DetectionCase::QuadraticPower : DetectionCase::QuadraticCyclic;
        rep.critical_points = match_critical(fixed_points_of(G.elements[gen]), crit);
        rep.critical_values = exactly_two(X, "all-critical fibers");
        return rep;
    }

    if (G.iso.kind == GroupKind::Dihedral && G.iso.order == 8) {
        std::size_t rot = G.rotation.value_or(G.size());
        if (rot >= G.size() || G.elements[rot].order != 4) {
            throw Error(ErrorKind::InternalError, "dihedral group without an order-4 rotation");
        }
        ev.deck_element = rot;
        rep.case_label = DetectionCase::D8PowerLike;
        const auto& r = G.elements[rot];
        GroupElement mu;
        mu.approx = compose(r.approx, r.approx).normalized();
        if (r.exact) {
            mu.exact = mobius_compose(*r.exact, *r.exact);
        }
        rep.critical_points = match_critical(fixed_points_of(r), crit);
        rep.critical_values = swapped_pair(mu, X);
        return rep;
    }

    if (G.iso.kind != GroupKind::V4) {
        throw Error(ErrorKind::HypothesisViolation, "deck group " + G.iso.to_string() + " does not occur for quadratic iterates");
    }

    std::size_t involution = 0;
    if (auto pair = route_by_images(F, dr, X, ev)) {
        rep.case_label = DetectionCase::V4NoFixedPoint;
        involution = involution_with_fixed_set(dr, *pair);
    } else {
        auto P = postcritical_set(F, crit);
        if (!P) {
            throw Error(ErrorKind::HypothesisViolation, "special pairs are not separated and the map is not postcritically finite");
        }
        for (const auto& p : *P) {
            if (!contains(X, p) && same_point(ratmap_eval(F, p), p, kPointTol)) {
                if (ev.alpha) {
                    throw Error(ErrorKind::HypothesisViolation, "several fixed postcritical points");
                }
                ev.alpha = p;
            }
        }
        if (!ev.alpha) {
            throw Error(ErrorKind::HypothesisViolation, "no fixed postcritical point");
        }
        if (P->size() < 4 || X.size() != 3) {
            throw Error(ErrorKind::HypothesisViolation, "postcritical set too small for the fixed-point case");
        }
        const std::size_t m = P->size() - 2;
        ev.m = m;
        if (m == 2) {
            rep.case_label = DetectionCase::V4FixedPointM2CrossRatio;
            for (std::size_t i = 0; i < 3; ++i) {
                const auto& o1 = X[(i + 1) % 3];
                const auto& o2 = X[(i + 2) % 3];
                CrossRatio cr = cross_ratio(o1, o2, *ev.alpha, X[i]);
                if (cr.in_lattes_set()) {
                    if (ev.beta) {
                        throw Error(ErrorKind::HypothesisViolation, "cross ratio does not single out a point");
                    }
                    ev.beta = X[i];
                    ev.cross_ratio = cr;
                }
            }
        } else {
            rep.case_label = DetectionCase::V4FixedPointMGt2Counts;
            std::size_t best = std::numeric_limits<std::size_t>::max();
            bool tie = false;
            for (const auto& p : *P) {
                std::size_t n = count_critical_in_fiber(F, crit, p);
                ev.fiber_counts.push_back({p, n});
                if (same_point(p, *ev.alpha, kPointTol)) {
                    continue;
                }
                if (n < best) {
                    best = n;
                    ev.beta = p;
                    tie = false;
                } else if (n == best) {
                    tie = true;
                }
            }
            if (tie) {
                ev.beta.reset();
            }
        }
        if (!ev.beta) {
            throw Error(ErrorKind::HypothesisViolation, "could not locate the last strictly preperiodic point");
        }
        std::optional<std::size_t> found;
        for (const auto& sp : *dr.special_pairs) {
            if (same_point(apply(G.elements[sp.involution], *ev.alpha), *ev.beta, kPointTol)) {
                found = sp.involution;
            }
        }
        if (!found) {
            throw Error(ErrorKind::HypothesisViolation, "no deck involution sends alpha to beta");
        }
        involution = *found;
    }
    ev.deck_element = involution;
    const auto& mu = G.elements[involution];
    rep.critical_points = match_critical(fixed_points_of(mu), crit);
    rep.critical_values = swapped_pair(mu, X);
    return rep;
}

MobiusTransform mobius_factor(const RationalMap& f, const RationalMap& g) {
    if (f.degree() != g.degree()) {
        throw Error(ErrorKind::InvalidArgument, "maps of different degree");
    }
    CriticalData cf = critical_data(f, Mode::Exact);
    CriticalData cg = critical_data(g, Mode::Exact);
    if (!cf.bicritical || !cg.bicritical) {
        throw Error(ErrorKind::InvalidArgument, "mobius factor needs bicritical maps");
    }
    if (!same_point_set(cf.point_set(), cg.point_set())) {
        throw Error(ErrorKind::InvalidArgument, "maps have different critical points");
    }
    auto certified = [&](const MobiusTransform& mu) { return ratmap_compose(mu.to_map(), f) == g; };
    const PointValue c1 = cf.points[0].point;
    const PointValue c2 = cf.points[1].point;
    std::optional<SpherePoint> a;
    for (long n : {0L, 1L, -1L, 2L, -2L, 3L}) {
        PointValue cand{SpherePoint(n)};
        if (!same_point(cand, c1) && !same_point(cand, c2)) {
            a = SpherePoint(n);
            break;
        }
    }
    if (c1.exact && c2.exact) {
        std::array<SpherePoint, 3> src{f(*c1.exact), f(*c2.exact), f(*a)};
        std::array<SpherePoint, 3> dst{g(*c1.exact), g(*c2.exact), g(*a)};
        MobiusTransform z = MobiusTransform::chart(src[0], src[1], src[2]);
        MobiusTransform w = MobiusTransform::chart(dst[0], dst[1], dst[2]);
        MobiusTransform mu = mobius_compose(w.inverse(), z);
        if (!certified(mu)) {
            throw Error(ErrorKind::InternalError, "mobius factor failed certification");
        }
        return mu;
    }
    NumericMap<double> nf(f), ng(g);
    auto pa = NumPoint<double>::from(*a);
    auto z = NumMobius<double>::chart(nf(c1.approx), nf(c2.approx), nf(pa));
    auto w = NumMobius<double>::chart(ng(c1.approx), ng(c2.approx), ng(pa));
    if (auto mu = snap_mobius(compose(w.inverse(), z), 1000000, 53); mu && certified(*mu)) {
        return *mu;
    }
    // Irrational critical points and large coefficients: mu is rational since
    // f and g are, so solve num(g), den(g) in the basis {P, Q} exactly.
    const ComplexPoly& P = f.num();
    const ComplexPoly& Q = f.den();
    const std::size_t n = f.degree() + 1;
    std::optional<std::pair<std::size_t, std::size_t>> minor;
    GaussianRational det;
    for (std::size_t i = 0; i < n && !minor; ++i) {
        for (std::size_t j = i + 1; j < n && !minor; ++j) {
            det = P.coeff(i) * Q.coeff(j) - P.coeff(j) * Q.coeff(i);
            if (!det.is_zero()) {
                minor = {i, j};
            }
        }
    }
    if (!minor) {
        throw Error(ErrorKind::InternalError, "numerator and denominator are proportional");
    }
    auto [i, j] = *minor;
    auto solve = [&](const ComplexPoly& h) {
        GaussianRational x = (h.coeff(i) * Q.coeff(j) - h.coeff(j) * Q.coeff(i)) / det;
        GaussianRational y = (P.coeff(i) * h.coeff(j) - P.coeff(j) * h.coeff(i)) / det;
        return std::pair{x, y};
    };
    auto [ma, mb] = solve(g.num());
    auto [mc, md] = solve(g.den());
    if ((ma * md - mb * mc).is_zero()) {
        throw Error(ErrorKind::InternalError, "mobius factor is degenerate");
    }
    MobiusTransform mu(ma, mb, mc, md);
    if (!certified(mu)) {
        throw Error(ErrorKind::InternalError, "mobius factor failed certification");
    }
    return mu;
}

SharedIterateReport shared_iterate_analysis(const RationalMap& f, const RationalMap& g, std::size_t max_k,
                                            std::size_t degree_cap) {
    const std::size_t d = f.degree();
    if (d < 2 || g.degree() != d) {
        throw Error(ErrorKind::InvalidArgument, "shared iterate analysis needs two maps of the same degree >= 2");
    }
    if (max_k == 0) {
        throw Error(ErrorKind::InvalidArgument, "max_k must be positive");
    }
    if (!iterate_degree(d, max_k, degree_cap)) {
        throw Error(ErrorKind::DegreeOverflow, "degree " + std::to_string(d) + "^" + std::to_string(max_k) +
                                                   " exceeds the cap " + std::to_string(degree_cap));
    }
    CriticalData cf = critical_data(f, Mode::Exact);
    CriticalData cg = critical_data(g, Mode::Exact);
    if (!cf.bicritical || !cg.bicritical) {
        throw Error(ErrorKind::InvalidArgument, "shared iterate analysis needs bicritical maps");
    }
    SharedIterateReport rep;
    rep.max_k = max_k;
    rep.critical_points_f = cf.point_set();
    rep.critical_points_g = cg.point_set();
    rep.critical_values_f = cf.value_set();
    rep.critical_values_g = cg.value_set();
    const bool same_c = same_point_set(rep.critical_points_f, rep.critical_points_g);
    rep.cv_cp_agree = same_c && same_point_set(rep.critical_values_f, rep.critical_values_g);

    RationalMap F = f;
    RationalMap G = g;
    for (std::size_t k = 1; k <= max_k; ++k) {
        if (F == G) {
            rep.minimal_k = k;
            break;
        }
        if (k < max_k) {
            F = ratmap_compose(f, F);
            G = ratmap_compose(g, G);
        }
    }
    rep.second_iterate_equal = ratmap_compose(f, f) == ratmap_compose(g, g);
    rep.agreement_violation = rep.minimal_k && !rep.cv_cp_agree;

    if (rep.minimal_k && d % 2 == 0 && !cf.power_map && !cg.power_map && !(f == g) && same_c) {
        MobiusTransform mu = mobius_factor(f, g);
        rep.involution_mu = mu;
        rep.mu_is_involution = !mu.is_identity() && mobius_compose(mu, mu).is_identity();
        RationalMap m = mu.to_map();
        rep.mu_commutes_with_f = ratmap_compose(f, m) == ratmap_compose(m, f);
        auto transposes = [&](const std::vector<PointValue>& pts) {
            return pts.size() == 2 && same_point(apply(mu, pts[0]), pts[1], kPointTol) &&
                   same_point(apply(mu, pts[1]), pts[0], kPointTol);
        };
        rep.mu_transposes_critical_points = transposes(rep.critical_points_f);
        rep.mu_transposes_critical_values = transposes(rep.critical_values_f);
    }
    rep.symmetry_locus_member = rep.involution_mu.has_value();
    if (!rep.symmetry_locus_member) {
        try {
            rep.symmetry_locus_member = aut_group(f).size() > 1;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SearchFailure) {
                throw;
            }
        }
    }
    return rep;
}

} // namespace deckmap
