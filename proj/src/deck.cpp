#include "deckmap/deck.hpp"

#include "deckmap/error.hpp"
#include "deckmap/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace deckmap {

SpherePoint deck_base_point(std::size_t index) {
    switch (index) {
    case 0:
        return SpherePoint(2);
    case 1:
        return SpherePoint(3);
    case 2:
        return SpherePoint(GaussianRational(1, 1));
    case 3:
        return SpherePoint(GaussianRational(2, 1));
    case 4:
        return SpherePoint(GaussianRational(Rational(5, 2)));
    default: {
        const long j = static_cast<long>(index) - 5;
        return SpherePoint(GaussianRational(Rational(7 + j, 3), Rational(2 * j + 1, 5)));
    }
    }
}

bool is_regular_value(const RationalMap& F, const SpherePoint& w) {
    if (w.is_infinity()) {
        return false;
    }
    ComplexPoly g = F.num() - F.den().scaled(w.value());
    if (g.is_zero() || *g.degree() != F.degree()) {
        return false;
    }
    return *poly_gcd(g, g.derivative()).degree() == 0;
}

namespace {

template <class R>
struct CritPoint {
    NumPoint<R> z;
    std::size_t multiplicity;
};

template <class R>
NumPoint<R> narrow(const Complex<Quad>& z) {
    return {{static_cast<R>(z.re), static_cast<R>(z.im)}, false};
}

// Fibers and critical points of iterates are badly conditioned in the monomial
// basis (double roots can be off by 1e-3), so both are always found in binary128.
template <class R>
std::vector<NumPoint<R>> regular_fiber(const RationalMap& F, const SpherePoint& w) {
    ComplexPoly g = F.num() - F.den().scaled(w.value());
    std::vector<NumPoint<R>> out;
    for (const auto& z : aberth_roots(to_complex<Quad>(g))) {
        out.push_back(narrow<R>(z));
    }
    return out;
}

template <class R>
std::vector<CritPoint<R>> numeric_critical_points(const RationalMap& F) {
    ComplexPoly w = wronskian(F);
    std::vector<CritPoint<R>> out;
    for (const auto& r : poly_roots<Quad>(w)) {
        out.push_back({narrow<R>(r.z), r.multiplicity});
    }
    const std::size_t finite = w.degree_or_zero();
    if (2 * F.degree() - 2 > finite) {
        out.push_back({NumPoint<R>::infinity(), 2 * F.degree() - 2 - finite});
    }
    return out;
}

/// tau maps pts bijectively onto pts within tol.
template <class R>
bool permutes(const NumMobius<R>& tau, const std::vector<NumPoint<R>>& pts, R tol) {
    std::vector<bool> used(pts.size(), false);
    for (const auto& p : pts) {
        NumPoint<R> q = tau(p);
        std::size_t hit = pts.size();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (chordal(q, pts[j]) < tol) {
                hit = j;
                break;
            }
        }
        if (hit == pts.size() || used[hit]) {
            return false;
        }
        used[hit] = true;
    }
    return true;
}

template <class R>
bool preserves_critical(const NumMobius<R>& tau, const std::vector<CritPoint<R>>& crit, R tol) {
    for (const auto& c : crit) {
        NumPoint<R> q = tau(c.z);
        bool ok = false;
        for (const auto& e : crit) {
            if (e.multiplicity == c.multiplicity && chordal(q, e.z) < tol) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

struct RunResult {
    std::vector<GroupElement> elements;
    std::vector<SpherePoint> base_points;
};

std::vector<SpherePoint> choose_base_points(const RationalMap& F, const DeckOptions& opts) {
    std::vector<SpherePoint> out;
    for (std::size_t i = 0; i < opts.max_base_tries && out.size() < 3; ++i) {
        SpherePoint w = deck_base_point(i);
        if (is_regular_value(F, w)) {
            out.push_back(w);
        }
    }
    if (out.size() < 3) {
        throw Error(ErrorKind::SearchFailure, "no three regular fibers among the first " +
                                                  std::to_string(opts.max_base_tries) + " base points");
    }
    return out;
}

bool certify_deck(const RationalMap& F, const MobiusTransform& t) {
    return ratmap_compose(F, t.to_map()) == F;
}

template <class R>
RunResult run_deck(const RationalMap& F, const std::vector<SpherePoint>& base, const DeckOptions& opts) {
    using std::pow;
    const int bits = mantissa_bits<R>();
    const R tol = pow(R(2), -R(bits) / 3);
    const long max_den = 1L << (bits / 4);

    const auto fib1 = regular_fiber<R>(F, base[0]);
    const auto fib2 = regular_fiber<R>(F, base[1]);
    // Two pairs in harmonic position are preserved by four Mobius maps, so
    // degree 2 needs a third fiber to reject the extra two.
    const auto fib3 = regular_fiber<R>(F, base[2]);
    const auto crit = numeric_critical_points<R>(F);
    const std::size_t n = fib1.size();

    // Source triple: first three points of fib1 followed by fib2.
    std::array<std::pair<int, std::size_t>, 3> src;
    for (std::size_t j = 0; j < 3; ++j) {
        src[j] = j < n ? std::make_pair(0, j) : std::make_pair(1, j - n);
    }
    auto fiber_of = [&](int which) -> const std::vector<NumPoint<R>>& { return which == 0 ? fib1 : fib2; };
    std::array<NumPoint<R>, 3> p;
    std::array<std::size_t, 3> sizes{};
    for (std::size_t j = 0; j < 3; ++j) {
        p[j] = fiber_of(src[j].first)[src[j].second];
        sizes[j] = fiber_of(src[j].first).size();
    }
    const std::size_t total = sizes[0] * sizes[1] * sizes[2];
    std::vector<std::optional<NumMobius<R>>> found(total);
    parallel_for(total, worker_count(opts.workers), [&](std::size_t idx) {
        std::array<std::size_t, 3> t{idx / (sizes[1] * sizes[2]), (idx / sizes[2]) % sizes[1], idx % sizes[2]};
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = a + 1; b < 3; ++b) {
                if (src[a].first == src[b].first && t[a] == t[b]) {
                    return;
                }
            }
        }
        std::array<NumPoint<R>, 3> q;
        for (std::size_t j = 0; j < 3; ++j) {
            q[j] = fiber_of(src[j].first)[t[j]];
        }
        NumMobius<R> tau = NumMobius<R>::from_triples(p, q);
        if (permutes(tau, fib1, tol) && preserves_critical(tau, crit, tol) && permutes(tau, fib2, tol) &&
            permutes(tau, fib3, tol)) {
            found[idx] = tau.normalized();
        }
    });

    RunResult out;
    out.base_points = base;
    std::vector<NumMobius<R>> kept;
    for (const auto& c : found) {
        if (!c) {
            continue;
        }
        bool dup = std::any_of(kept.begin(), kept.end(),
                               [&](const NumMobius<R>& k) { return projective_distance(k, *c) < tol; });
        if (dup) {
            continue;
        }
        kept.push_back(*c);
        GroupElement e;
        e.approx = c->template cast<double>();
        if (auto s = snap_mobius(*c, max_den, bits)) {
            if (certify_deck(F, *s)) {
                e.exact = *s;
                e.approx = NumMobius<double>::from(*s);
                e.certified = true;
            }
        }
        out.elements.push_back(e);
    }
    if (out.elements.size() > F.degree()) {
        throw Error(ErrorKind::NumericFalsePositive,
                    "found " + std::to_string(out.elements.size()) + " deck candidates for degree " +
                        std::to_string(F.degree()) + "; re-run at higher precision");
    }
    return out;
}

MobiusGroup group_or_false_positive(std::vector<GroupElement> els) {
    try {
        return make_group(std::move(els));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InternalError || e.kind() == ErrorKind::NumericFalsePositive) {
            throw Error(ErrorKind::NumericFalsePositive, std::string("deck candidates do not form a group: ") + e.what());
        }
        throw;
    }
}

MobiusGroup deck_at(const RationalMap& F, const std::vector<SpherePoint>& base, const DeckOptions& opts,
                    int bits) {
    RunResult r = with_precision(bits, [&]<class R>(R) { return run_deck<R>(F, base, opts); });
    return group_or_false_positive(std::move(r.elements));
}

} // namespace

DeckResult deck_group_of(const RationalMap& F, const DeckOptions& opts) {
    if (F.degree() < 2) {
        throw Error(ErrorKind::InvalidArgument, "deck group needs degree >= 2");
    }
    DeckResult dr;
    dr.map_degree = F.degree();
    dr.precision_bits = opts.precision_bits;
    dr.base_points = choose_base_points(F, opts);
    dr.group = deck_at(F, dr.base_points, opts, opts.precision_bits);
    dr.iso_type_confirmed = dr.group.all_certified();
    if (!dr.iso_type_confirmed && opts.cross_check) {
        const int other = opts.precision_bits <= 53 ? 113 : 53;
        MobiusGroup again;
        bool agree = false;
        try {
            again = deck_at(F, dr.base_points, opts, other);
            agree = again.iso == dr.group.iso;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NumericFalsePositive && e.kind() != ErrorKind::NumericFailure) {
                throw;
            }
        }
        if (agree) {
            dr.iso_type_confirmed = true;
        } else {
            std::vector<MobiusTransform> certified;
            for (const auto& e : dr.group.elements) {
                if (e.certified) {
                    certified.push_back(*e.exact);
                }
            }
            dr.group = group_closure(certified, F.degree());
            dr.restricted_to_certified = true;
        }
    }
    if (dr.group.iso.kind == GroupKind::V4) {
        std::array<SpecialPair, 3> pairs;
        std::size_t slot = 0;
        for (std::size_t i = 0; i < dr.group.size(); ++i) {
            const auto& e = dr.group.elements[i];
            if (e.order != 2) {
                continue;
            }
            std::vector<PointValue> pts;
            if (e.exact) {
                pts = mobius_fixed_points(*e.exact).points;
            } else {
                for (const auto& p : numeric_fixed_points(e.approx)) {
                    pts.emplace_back(p);
                }
            }
            if (pts.size() != 2) {
                throw Error(ErrorKind::InternalError, "involution without two fixed points");
            }
            pairs[slot++] = {{pts[0], pts[1]}, i};
        }
        dr.special_pairs = pairs;
    }
    return dr;
}

DeckResult deck_group(const RationalMap& f, std::size_t k, const DeckOptions& opts) {
    if (f.degree() < 2) {
        throw Error(ErrorKind::InvalidArgument, "deck group needs degree >= 2");
    }
    DeckResult dr = deck_group_of(ratmap_iterate(f, k, opts.degree_cap), opts);
    dr.k = k;
    return dr;
}

std::string to_string(PairLabel label) {
    switch (label) {
    case PairLabel::CriticalPoints:
        return "C_f";
    case PairLabel::PreimageOfC1:
        return "f^-1(c1)";
    case PairLabel::PreimageOfC2:
        return "f^-1(c2)";
    }
    return "?";
}

std::array<LabeledPair, 3> special_pairs(const DeckResult& dr, const RationalMap& f) {
    if (!dr.special_pairs) {
        throw Error(ErrorKind::InvalidArgument, "special pairs exist only for V4 deck groups");
    }
    CriticalData cd = critical_data(f);
    if (!cd.bicritical) {
        throw Error(ErrorKind::InvalidArgument, "special pair labels need a bicritical map");
    }
    auto preimage = [&](const PointValue& c) {
        std::vector<PointValue> out;
        for (const auto& w : fiber(f, c)) {
            out.push_back(w.point);
        }
        return out;
    };
    const std::vector<PointValue> crit = cd.point_set();
    const std::vector<PointValue> pre1 = preimage(cd.points[0].point);
    const std::vector<PointValue> pre2 = preimage(cd.points[1].point);
    std::array<LabeledPair, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& sp = (*dr.special_pairs)[i];
        std::vector<PointValue> pts{sp.points[0], sp.points[1]};
        out[i].pair = sp;
        if (same_point_set(pts, crit)) {
            out[i].label = PairLabel::CriticalPoints;
        } else if (same_point_set(pts, pre1)) {
            out[i].label = PairLabel::PreimageOfC1;
        } else if (same_point_set(pts, pre2)) {
            out[i].label = PairLabel::PreimageOfC2;
        } else {
            throw Error(ErrorKind::HypothesisViolation,
                        "special pair {" + pts[0].to_string() + ", " + pts[1].to_string() +
                            "} is not C_f or a critical fiber of f");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

std::vector<PointValue> distinct_roots_with_infinity(const ComplexPoly& g, std::size_t expected_degree) {
    std::vector<PointValue> out;
    for (const auto& w : polynomial_roots(g, Mode::Exact)) {
        out.push_back(w.point);
    }
    if (g.degree_or_zero() < expected_degree || g.is_zero()) {
        out.emplace_back(SpherePoint::infinity());
    }
    return out;
}

void remove_known(std::vector<PointValue>& pts, const std::vector<PointValue>& known) {
    std::erase_if(pts, [&](const PointValue& p) {
        return std::any_of(known.begin(), known.end(), [&](const PointValue& q) { return same_point(p, q, 1e-9); });
    });
}

bool maps_class_into(const NumMobius<double>& tau, const std::vector<PointValue>& cls, double tol) {
    std::vector<NumPoint<double>> pts;
    for (const auto& p : cls) {
        pts.push_back(p.approx);
    }
    return permutes(tau, pts, tol);
}

} // namespace

MobiusGroup aut_group(const RationalMap& f, const DeckOptions& opts) {
    const std::size_t d = f.degree();
    if (d < 2) {
        throw Error(ErrorKind::InvalidArgument, "automorphism group needs degree >= 2");
    }
    const ComplexPoly z = ComplexPoly({0, 1});
    CriticalData cd = critical_data(f);
    std::vector<PointValue> crit = cd.point_set();
    std::vector<PointValue> fix = distinct_roots_with_infinity(f.num() - z * f.den(), d + 1);
    RationalMap f2 = ratmap_compose(f, f);
    std::vector<PointValue> per2 = distinct_roots_with_infinity(f2.num() - z * f2.den(), d * d + 1);
    remove_known(fix, crit);
    remove_known(per2, crit);
    remove_known(per2, fix);
    std::vector<std::vector<PointValue>> classes{crit, fix, per2};

    std::vector<std::pair<std::size_t, std::size_t>> src;
    for (std::size_t c = 0; c < classes.size() && src.size() < 3; ++c) {
        for (std::size_t j = 0; j < classes[c].size() && src.size() < 3; ++j) {
            src.emplace_back(c, j);
        }
    }
    if (src.size() < 3) {
        throw Error(ErrorKind::SearchFailure, "fewer than three marked points for the automorphism search");
    }
    const double tol = 1e-6;
    const int bits = opts.precision_bits <= 53 ? 53 : 113;
    const long max_den = 1L << (bits / 4);
    std::array<NumPoint<double>, 3> p;
    for (std::size_t j = 0; j < 3; ++j) {
        p[j] = classes[src[j].first][src[j].second].approx;
    }
    std::vector<MobiusTransform> found;
    const auto& c0 = classes[src[0].first];
    const auto& c1 = classes[src[1].first];
    const auto& c2 = classes[src[2].first];
    for (std::size_t a = 0; a < c0.size(); ++a) {
        for (std::size_t b = 0; b < c1.size(); ++b) {
            for (std::size_t c = 0; c < c2.size(); ++c) {
                if ((src[0].first == src[1].first && a == b) || (src[0].first == src[2].first && a == c) ||
                    (src[1].first == src[2].first && b == c)) {
                    continue;
                }
                NumMobius<double> tau = NumMobius<double>::from_triples(p, {c0[a].approx, c1[b].approx, c2[c].approx});
                bool ok = true;
                for (const auto& cls : classes) {
                    ok = ok && maps_class_into(tau, cls, tol);
                }
                if (!ok) {
                    continue;
                }
                auto s = snap_mobius(tau, max_den, 53);
                if (!s || std::find(found.begin(), found.end(), *s) != found.end()) {
                    continue;
                }
                if (ratmap_compose(f, s->to_map()) == ratmap_compose(s->to_map(), f)) {
                    found.push_back(*s);
                }
            }
        }
    }
    // Finite Mobius groups with a nontrivial element fixing the marked classes
    // are bounded by the polyhedral order.
    return group_closure(found, 60);
}

} // namespace deckmap
