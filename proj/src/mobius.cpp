#include "deckmap/mobius.hpp"

#include "deckmap/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace deckmap {

// ---------------------------------------------------------------------------
// Exact transforms

MobiusTransform::MobiusTransform(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (det().is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "singular Mobius matrix");
    }
    canonicalize();
}

void MobiusTransform::canonicalize() {
    const GaussianRational* first = nullptr;
    for (const auto* x : {&a_, &b_, &c_, &d_}) {
        if (!x->is_zero()) {
            first = x;
            break;
        }
    }
    GaussianRational inv = first->inverse();
    if (inv == GaussianRational(1)) {
        return;
    }
    a_ *= inv;
    b_ *= inv;
    c_ *= inv;
    d_ *= inv;
}

MobiusTransform MobiusTransform::identity() {
    return {1, 0, 0, 1};
}

MobiusTransform MobiusTransform::chart(const SpherePoint& z1, const SpherePoint& z2, const SpherePoint& z3) {
    if (z1 == z2 || z1 == z3 || z2 == z3) {
        throw Error(ErrorKind::InvalidArgument, "chart needs three distinct points");
    }
    // (z - z1)(z3 - z2) / ((z - z2)(z3 - z1)) with infinite entries cancelled.
    if (z1.is_infinity()) {
        return {0, z3.value() - z2.value(), 1, -z2.value()};
    }
    if (z2.is_infinity()) {
        return {1, -z1.value(), 0, z3.value() - z1.value()};
    }
    if (z3.is_infinity()) {
        return {1, -z1.value(), 1, -z2.value()};
    }
    GaussianRational u = z3.value() - z2.value();
    GaussianRational v = z3.value() - z1.value();
    return {u, -z1.value() * u, v, -z2.value() * v};
}

MobiusTransform MobiusTransform::from_triples(const std::array<SpherePoint, 3>& p,
                                              const std::array<SpherePoint, 3>& q) {
    MobiusTransform s = chart(p[0], p[1], p[2]);
    MobiusTransform t = chart(q[0], q[1], q[2]);
    return mobius_compose(t.inverse(), s);
}

MobiusTransform MobiusTransform::from_map(const RationalMap& f) {
    if (f.degree() != 1) {
        throw Error(ErrorKind::InvalidArgument, "not a degree-1 map: " + f.to_string());
    }
    return {f.num().coeff(1), f.num().coeff(0), f.den().coeff(1), f.den().coeff(0)};
}

MobiusTransform MobiusTransform::inverse() const {
    return {d_, -b_, -c_, a_};
}

bool MobiusTransform::is_identity() const {
    return b_.is_zero() && c_.is_zero() && a_ == d_;
}

SpherePoint MobiusTransform::operator()(const SpherePoint& z) const {
    if (z.is_infinity()) {
        if (c_.is_zero()) {
            return SpherePoint::infinity();
        }
        return SpherePoint(a_ / c_);
    }
    GaussianRational den = c_ * z.value() + d_;
    if (den.is_zero()) {
        return SpherePoint::infinity();
    }
    return SpherePoint((a_ * z.value() + b_) / den);
}

RationalMap MobiusTransform::to_map() const {
    return RationalMap(ComplexPoly({b_, a_}), ComplexPoly({d_, c_}));
}

std::string MobiusTransform::to_string() const {
    std::ostringstream os;
    os << "((" << a_.to_string() << ")*z + (" << b_.to_string() << "))/((" << c_.to_string() << ")*z + ("
       << d_.to_string() << "))";
    return os.str();
}

bool operator==(const MobiusTransform& s, const MobiusTransform& t) {
    // Both canonical, so projective equality is entrywise.
    return s.a_ == t.a_ && s.b_ == t.b_ && s.c_ == t.c_ && s.d_ == t.d_;
}

MobiusTransform mobius_compose(const MobiusTransform& s, const MobiusTransform& t) {
    return {s.a() * t.a() + s.b() * t.c(), s.a() * t.b() + s.b() * t.d(), s.c() * t.a() + s.d() * t.c(),
            s.c() * t.b() + s.d() * t.d()};
}

MobiusTransform mobius_power(const MobiusTransform& t, std::size_t n) {
    MobiusTransform acc = MobiusTransform::identity();
    MobiusTransform base = t;
    while (n > 0) {
        if (n & 1U) {
            acc = mobius_compose(acc, base);
        }
        base = mobius_compose(base, base);
        n >>= 1U;
    }
    return acc;
}

FixedPoints mobius_fixed_points(const MobiusTransform& t) {
    if (t.is_identity()) {
        throw Error(ErrorKind::InvalidArgument, "the identity fixes every point");
    }
    FixedPoints out;
    const auto& a = t.a();
    const auto& b = t.b();
    const auto& c = t.c();
    const auto& d = t.d();
    if (c.is_zero()) {
        // az + b = dz  plus infinity
        out.exact = true;
        if (!(a == d)) {
            out.points.emplace_back(SpherePoint(b / (d - a)));
        }
        out.points.emplace_back(SpherePoint::infinity());
        return out;
    }
    // c z^2 + (d - a) z - b = 0
    GaussianRational disc = (d - a) * (d - a) + GaussianRational(4) * b * c;
    GaussianRational two_c = GaussianRational(2) * c;
    if (auto s = disc.sqrt()) {
        out.exact = true;
        out.points.emplace_back(SpherePoint((a - d + *s) / two_c));
        if (!s->is_zero()) {
            out.points.emplace_back(SpherePoint((a - d - *s) / two_c));
        }
        return out;
    }
    auto nt = NumMobius<double>::from(t);
    for (const auto& p : numeric_fixed_points(nt)) {
        out.points.emplace_back(p);
    }
    return out;
}

std::optional<std::size_t> mobius_order(const MobiusTransform& t, std::size_t max_order) {
    MobiusTransform acc = t;
    for (std::size_t n = 1; n <= max_order; ++n) {
        if (acc.is_identity()) {
            return n;
        }
        acc = mobius_compose(acc, t);
    }
    return std::nullopt;
}

RationalMap conjugate(const RationalMap& f, const MobiusTransform& phi) {
    return ratmap_compose(phi.inverse().to_map(), ratmap_compose(f, phi.to_map()));
}

// ---------------------------------------------------------------------------
// Numeric transforms

template <class R>
NumMobius<R> NumMobius<R>::from(const MobiusTransform& t) {
    NumMobius out;
    auto e = t.entries();
    for (int i = 0; i < 4; ++i) {
        out.m[i] = to_complex<R>(e[i]);
    }
    return out;
}

template <class R>
NumMobius<R> NumMobius<R>::chart(const NumPoint<R>& z1, const NumPoint<R>& z2, const NumPoint<R>& z3) {
    const Complex<R> one(R(1));
    const Complex<R> zero;
    NumMobius out;
    if (z1.inf) {
        out.m = {zero, z3.z - z2.z, one, -z2.z};
    } else if (z2.inf) {
        out.m = {one, -z1.z, zero, z3.z - z1.z};
    } else if (z3.inf) {
        out.m = {one, -z1.z, one, -z2.z};
    } else {
        Complex<R> u = z3.z - z2.z;
        Complex<R> v = z3.z - z1.z;
        out.m = {u, -(z1.z * u), v, -(z2.z * v)};
    }
    return out;
}

template <class R>
NumMobius<R> NumMobius<R>::from_triples(const std::array<NumPoint<R>, 3>& p, const std::array<NumPoint<R>, 3>& q) {
    return compose(chart(q[0], q[1], q[2]).inverse(), chart(p[0], p[1], p[2]));
}

template <class R>
NumPoint<R> NumMobius<R>::operator()(const NumPoint<R>& z) const {
    Complex<R> num;
    Complex<R> den;
    if (z.inf) {
        num = m[0];
        den = m[2];
    } else {
        num = m[0] * z.z + m[1];
        den = m[2] * z.z + m[3];
    }
    if (den.norm() == R(0)) {
        return NumPoint<R>::infinity();
    }
    return {num / den, false};
}

template <class R>
NumMobius<R> NumMobius<R>::inverse() const {
    NumMobius out;
    out.m = {m[3], -m[1], -m[2], m[0]};
    return out;
}

template <class R>
NumMobius<R> NumMobius<R>::normalized() const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (m[i].norm() > m[k].norm()) {
            k = i;
        }
    }
    NumMobius out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.m[i] = m[i] / m[k];
    }
    out.m[k] = Complex<R>(R(1));
    return out;
}

template <class R>
NumMobius<R> compose(const NumMobius<R>& s, const NumMobius<R>& t) {
    NumMobius<R> out;
    out.m = {s.m[0] * t.m[0] + s.m[1] * t.m[2], s.m[0] * t.m[1] + s.m[1] * t.m[3],
             s.m[2] * t.m[0] + s.m[3] * t.m[2], s.m[2] * t.m[1] + s.m[3] * t.m[3]};
    return out.normalized();
}

template <class R>
R projective_distance(const NumMobius<R>& s, const NumMobius<R>& t) {
    using std::sqrt;
    R ns(0);
    R nt(0);
    for (int i = 0; i < 4; ++i) {
        ns += s.m[i].norm();
        nt += t.m[i].norm();
    }
    R worst(0);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            worst = std::max(worst, (s.m[i] * t.m[j] - s.m[j] * t.m[i]).abs());
        }
    }
    return worst / sqrt(ns * nt);
}

template <class R>
std::vector<NumPoint<R>> numeric_fixed_points(const NumMobius<R>& t0) {
    NumMobius<R> t = t0.normalized();
    const auto& [a, b, c, d] = t.m;
    const R tiny = R(1e3) * unit_roundoff<R>();
    std::vector<NumPoint<R>> out;
    if (c.abs() <= tiny) {
        if ((a - d).abs() > tiny) {
            out.push_back({b / (d - a), false});
        }
        out.push_back(NumPoint<R>::infinity());
        return out;
    }
    Complex<R> disc = (d - a) * (d - a) + Complex<R>(R(4)) * b * c;
    Complex<R> s = complex_sqrt(disc);
    Complex<R> two_c = Complex<R>(R(2)) * c;
    // Choose the numerically stable root first, then Vieta for the other.
    Complex<R> q = (a - d).re * s.re + (a - d).im * s.im >= R(0) ? (a - d) + s : (a - d) - s;
    if (q.abs() <= tiny) {
        out.push_back({(a - d) / two_c, false});
        return out;
    }
    Complex<R> z1 = q / two_c;
    // product of roots = -b/c
    Complex<R> z2 = (-b / c) / z1;
    if (z1.abs() <= tiny) {
        z2 = (a - d) / c - z1;
    }
    out.push_back({z1, false});
    if (s.abs() > tiny) {
        out.push_back({z2, false});
    }
    return out;
}

template <class R>
std::optional<MobiusTransform> snap_mobius(const NumMobius<R>& t, long max_den, int precision_bits) {
    NumMobius<R> n = t.normalized();
    std::array<GaussianRational, 4> e;
    for (int i = 0; i < 4; ++i) {
        auto g = snap_to_exact(n.m[i], max_den, precision_bits);
        if (!g) {
            return std::nullopt;
        }
        e[i] = *g;
    }
    if ((e[0] * e[3] - e[1] * e[2]).is_zero()) {
        return std::nullopt;
    }
    return MobiusTransform(e[0], e[1], e[2], e[3]);
}

template struct NumMobius<double>;
template struct NumMobius<Quad>;
template NumMobius<double> compose(const NumMobius<double>&, const NumMobius<double>&);
template NumMobius<Quad> compose(const NumMobius<Quad>&, const NumMobius<Quad>&);
template double projective_distance(const NumMobius<double>&, const NumMobius<double>&);
template Quad projective_distance(const NumMobius<Quad>&, const NumMobius<Quad>&);
template std::vector<NumPoint<double>> numeric_fixed_points(const NumMobius<double>&);
template std::vector<NumPoint<Quad>> numeric_fixed_points(const NumMobius<Quad>&);
template std::optional<MobiusTransform> snap_mobius(const NumMobius<double>&, long, int);
template std::optional<MobiusTransform> snap_mobius(const NumMobius<Quad>&, long, int);

// ---------------------------------------------------------------------------
// Classification

std::string IsoType::to_string() const {
    switch (kind) {
    case GroupKind::Cyclic:
        return "Cyclic(" + std::to_string(order) + ")";
    case GroupKind::Dihedral:
        return "Dihedral(" + std::to_string(order) + ")";
    case GroupKind::V4:
        return "V4";
    case GroupKind::A4:
        return "A4";
    case GroupKind::S4:
        return "S4";
    case GroupKind::A5:
        return "A5";
    }
    return "?";
}

Classification classify_group(const CayleyTable& table, std::size_t identity) {
    const std::size_t n = table.size();
    Classification out;
    out.orders.assign(n, 0);
    for (std::size_t g = 0; g < n; ++g) {
        std::size_t x = g;
        std::size_t k = 1;
        while (x != identity) {
            x = table[x][g];
            if (++k > n) {
                throw Error(ErrorKind::InternalError, "inconsistent group table");
            }
        }
        out.orders[g] = k;
    }
    std::map<std::size_t, std::size_t> census;
    for (std::size_t o : out.orders) {
        census[o] += 1;
    }
    out.iso.order = n;
    for (std::size_t g = 0; g < n; ++g) {
        if (out.orders[g] == n) {
            out.iso.kind = GroupKind::Cyclic;
            return out;
        }
    }
    if (n == 4 && census[2] == 3) {
        out.iso.kind = GroupKind::V4;
        return out;
    }
    if (n % 2 == 0 && n >= 6) {
        const std::size_t half = n / 2;
        for (std::size_t r = 0; r < n; ++r) {
            if (out.orders[r] != half) {
                continue;
            }
            std::vector<bool> in_rot(n, false);
            std::size_t x = identity;
            for (std::size_t k = 0; k < half; ++k) {
                in_rot[x] = true;
                x = table[x][r];
            }
            std::size_t r_inv = identity;
            for (std::size_t k = 0; k + 1 < half; ++k) {
                r_inv = table[r_inv][r];
            }
            for (std::size_t s = 0; s < n; ++s) {
                if (in_rot[s] || out.orders[s] != 2) {
                    continue;
                }
                if (table[table[s][r]][s] == r_inv) {
                    out.iso.kind = GroupKind::Dihedral;
                    out.rotation = r;
                    out.reflection = s;
                    return out;
                }
            }
        }
    }
    auto census_is = [&](std::map<std::size_t, std::size_t> want) {
        want[1] = 1;
        return census == want;
    };
    if (n == 12 && census_is({{2, 3}, {3, 8}})) {
        out.iso.kind = GroupKind::A4;
        return out;
    }
    if (n == 24 && census_is({{2, 9}, {3, 8}, {4, 6}})) {
        out.iso.kind = GroupKind::S4;
        return out;
    }
    if (n == 60 && census_is({{2, 15}, {3, 20}, {5, 24}})) {
        out.iso.kind = GroupKind::A5;
        return out;
    }
    throw Error(ErrorKind::InternalError, "group of order " + std::to_string(n) + " is not a finite Mobius group type");
}

std::string GroupElement::to_string() const {
    if (exact) {
        return exact->to_string();
    }
    NumMobius<double> n = approx.normalized();
    std::ostringstream os;
    os.precision(12);
    auto put = [&](const Complex<double>& z) { os << "(" << z.re << (z.im < 0 ? "-" : "+") << std::abs(z.im) << "i)"; };
    os << "(";
    put(n.m[0]);
    os << "*z + ";
    put(n.m[1]);
    os << ")/(";
    put(n.m[2]);
    os << "*z + ";
    put(n.m[3]);
    os << ")";
    return os.str();
}

bool MobiusGroup::all_certified() const {
    return std::all_of(elements.begin(), elements.end(), [](const GroupElement& e) { return e.certified; });
}

std::vector<std::size_t> MobiusGroup::order_census() const {
    std::vector<std::size_t> out;
    for (const auto& e : elements) {
        out.push_back(e.order);
    }
    return out;
}

namespace {

bool element_less(const GroupElement& x, const GroupElement& y) {
    if (x.order != y.order) {
        return x.order < y.order;
    }
    if (x.exact.has_value() != y.exact.has_value()) {
        return x.exact.has_value();
    }
    NumMobius<double> a = x.approx.normalized();
    NumMobius<double> b = y.approx.normalized();
    for (int i = 0; i < 4; ++i) {
        // Rounded so that numerically equal entries compare equal.
        double ar = std::round(a.m[i].re * 1e6);
        double br = std::round(b.m[i].re * 1e6);
        if (ar != br) {
            return ar < br;
        }
        double ai = std::round(a.m[i].im * 1e6);
        double bi = std::round(b.m[i].im * 1e6);
        if (ai != bi) {
            return ai < bi;
        }
    }
    return false;
}

std::size_t find_element(const std::vector<GroupElement>& els, const GroupElement& x, double tol) {
    for (std::size_t i = 0; i < els.size(); ++i) {
        if (x.exact && els[i].exact) {
            if (*x.exact == *els[i].exact) {
                return i;
            }
            continue;
        }
        if (projective_distance(x.approx, els[i].approx) < tol) {
            return i;
        }
    }
    return els.size();
}

GroupElement multiply(const GroupElement& x, const GroupElement& y) {
    GroupElement out;
    if (x.exact && y.exact) {
        out.exact = mobius_compose(*x.exact, *y.exact);
        out.approx = NumMobius<double>::from(*out.exact);
    } else {
        out.approx = compose(x.approx, y.approx);
    }
    return out;
}

} // namespace

MobiusGroup make_group(std::vector<GroupElement> elements, double tol) {
    const std::size_t n = elements.size();
    CayleyTable table(n, std::vector<std::size_t>(n));
    std::size_t identity = n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = elements[i];
        bool is_id = e.exact ? e.exact->is_identity()
                             : projective_distance(e.approx, NumMobius<double>::identity()) < tol;
        if (is_id) {
            identity = i;
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t k = find_element(elements, multiply(e, elements[j]), tol);
            if (k == n) {
                throw Error(ErrorKind::NumericFalsePositive, "element list is not closed under composition");
            }
            table[i][j] = k;
        }
    }
    if (identity == n) {
        throw Error(ErrorKind::InternalError, "group without identity");
    }
    Classification cls = classify_group(table, identity);
    for (std::size_t i = 0; i < n; ++i) {
        elements[i].order = cls.orders[i];
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t x, std::size_t y) { return element_less(elements[x], elements[y]); });
    std::vector<std::size_t> where(n);
    MobiusGroup g;
    for (std::size_t i = 0; i < n; ++i) {
        where[perm[i]] = i;
        g.elements.push_back(elements[perm[i]]);
    }
    g.iso = cls.iso;
    if (cls.rotation) {
        g.rotation = where[*cls.rotation];
        g.reflection = where[*cls.reflection];
    }
    return g;
}

MobiusGroup group_closure(const std::vector<MobiusTransform>& gens, std::size_t cap) {
    if (cap < 1) {
        throw Error(ErrorKind::InvalidArgument, "closure cap must be >= 1");
    }
    std::vector<MobiusTransform> els{MobiusTransform::identity()};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        MobiusTransform x = els[queue.front()];
        queue.pop_front();
        for (const auto& g : gens) {
            MobiusTransform y = mobius_compose(x, g);
            if (std::find(els.begin(), els.end(), y) == els.end()) {
                els.push_back(y);
                if (els.size() > cap) {
                    throw Error(ErrorKind::SearchFailure,
                                "closure exceeds " + std::to_string(cap) + " elements (infinite group?)");
                }
                queue.push_back(els.size() - 1);
            }
        }
    }
    std::vector<GroupElement> elements;
    for (const auto& t : els) {
        elements.push_back({t, NumMobius<double>::from(t), 1, true});
    }
    return make_group(std::move(elements));
}

// ---------------------------------------------------------------------------
// Commuting pairs

std::string to_string(BeardonCase c) {
    switch (c) {
    case BeardonCase::SameFixedSet:
        return "same-fixed-set";
    case BeardonCase::InvolutionPair:
        return "involution-pair";
    case BeardonCase::None:
        return "none";
    }
    return "none";
}

CommutingReport commuting_structure(const MobiusTransform& s, const MobiusTransform& t) {
    if (s.is_identity() || t.is_identity()) {
        throw Error(ErrorKind::InvalidArgument, "commuting structure needs non-identity transforms");
    }
    CommutingReport r;
    r.commute = mobius_compose(s, t) == mobius_compose(t, s);
    r.both_involutions = mobius_compose(s, s).is_identity() && mobius_compose(t, t).is_identity();
    FixedPoints fs = mobius_fixed_points(s);
    FixedPoints ft = mobius_fixed_points(t);
    r.disjoint_fixed_sets = true;
    for (const auto& p : fs.points) {
        for (const auto& q : ft.points) {
            if (same_point(p, q, 1e-9)) {
                r.disjoint_fixed_sets = false;
            }
        }
    }
    if (!r.commute) {
        return r;
    }
    if (same_point_set(fs.points, ft.points, 1e-9)) {
        r.beardon = BeardonCase::SameFixedSet;
    } else if (r.both_involutions && r.disjoint_fixed_sets && mobius_compose(mobius_compose(s, t), mobius_compose(s, t)).is_identity()) {
        r.beardon = BeardonCase::InvolutionPair;
    }
    return r;
}

} // namespace deckmap
