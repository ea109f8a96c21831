#include "deckmap/ratmap.hpp"

#include "deckmap/error.hpp"

#include <algorithm>
#include <sstream>

namespace deckmap {

// ---------------------------------------------------------------------------
// RationalMap

RationalMap::RationalMap(const ComplexPoly& num, const ComplexPoly& den) {
    if (den.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "rational map with zero denominator");
    }
    if (num.is_zero()) {
        num_ = num;
        den_ = ComplexPoly::constant(1);
    } else {
        ComplexPoly g = poly_gcd(num, den);
        num_ = poly_exact_div(num, g);
        den_ = poly_exact_div(den, g);
    }
    canonicalize();
}

RationalMap RationalMap::identity() {
    return from_coprime(ComplexPoly({0, 1}), ComplexPoly::constant(1));
}

RationalMap RationalMap::from_coprime(const ComplexPoly& num, const ComplexPoly& den) {
    if (den.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "rational map with zero denominator");
    }
    RationalMap f;
    f.num_ = num;
    f.den_ = den;
    f.canonicalize();
    return f;
}

void RationalMap::canonicalize() {
    GaussianRational inv = den_.leading().inverse();
    if (!(inv == GaussianRational(1))) {
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
    degree_ = std::max(num_.degree_or_zero(), den_.degree_or_zero());
}

SpherePoint RationalMap::operator()(const SpherePoint& z) const {
    if (z.is_infinity()) {
        const std::size_t dp = num_.degree_or_zero();
        const std::size_t dq = den_.degree_or_zero();
        if (num_.is_zero()) {
            return SpherePoint(0);
        }
        if (dp > dq) {
            return SpherePoint::infinity();
        }
        if (dp < dq) {
            return SpherePoint(0);
        }
        return SpherePoint(num_.leading() / den_.leading());
    }
    GaussianRational q = den_(z.value());
    if (q.is_zero()) {
        return SpherePoint::infinity();
    }
    return SpherePoint(num_(z.value()) / q);
}

std::string RationalMap::to_string() const {
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------------------
// NumericMap

template <class R>
NumericMap<R>::NumericMap(const RationalMap& f) : degree_(f.degree()) {
    num_.assign(degree_ + 1, Complex<R>());
    den_.assign(degree_ + 1, Complex<R>());
    for (std::size_t k = 0; k <= degree_; ++k) {
        num_[k] = to_complex<R>(f.num().coeff(k));
        den_[k] = to_complex<R>(f.den().coeff(k));
    }
}

template <class R>
NumPoint<R> NumericMap<R>::operator()(const NumPoint<R>& z) const {
    Complex<R> p;
    Complex<R> q;
    if (z.inf) {
        p = num_[degree_];
        q = den_[degree_];
    } else if (z.z.abs() <= R(1)) {
        for (std::size_t k = degree_ + 1; k-- > 0;) {
            p = p * z.z + num_[k];
            q = q * z.z + den_[k];
        }
    } else {
        // [z : 1] ~ [1 : w] with w = 1/z
        Complex<R> w = Complex<R>(R(1)) / z.z;
        for (std::size_t k = 0; k <= degree_; ++k) {
            p = p * w + num_[k];
            q = q * w + den_[k];
        }
    }
    if (q.norm() == R(0)) {
        return NumPoint<R>::infinity();
    }
    return {p / q, false};
}

template class NumericMap<double>;
template class NumericMap<Quad>;

// ---------------------------------------------------------------------------
// Composition and iteration

SpherePoint ratmap_eval(const RationalMap& f, const SpherePoint& z) {
    return f(z);
}

PointValue ratmap_eval(const RationalMap& f, const PointValue& z) {
    if (z.exact) {
        return PointValue(f(*z.exact));
    }
    return PointValue(NumericMap<double>(f)(z.approx));
}

RationalMap ratmap_compose(const RationalMap& f, const RationalMap& g) {
    // Homogenized substitution of the coprime pair (A, B) of g into the binary
    // forms of f keeps the pair coprime.
    const std::size_t d = f.degree();
    ComplexPoly num = poly_homogeneous_substitute(f.num(), g.num(), g.den(), d);
    ComplexPoly den = poly_homogeneous_substitute(f.den(), g.num(), g.den(), d);
    return RationalMap::from_coprime(num, den);
}

std::optional<std::size_t> iterate_degree(std::size_t d, std::size_t k, std::size_t cap) {
    std::size_t acc = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (d != 0 && acc > cap / d) {
            return std::nullopt;
        }
        acc *= d;
    }
    if (acc > cap) {
        return std::nullopt;
    }
    return acc;
}

RationalMap ratmap_iterate(const RationalMap& f, std::size_t k, std::size_t degree_cap) {
    if (k < 1) {
        throw Error(ErrorKind::InvalidArgument, "iterate count must be >= 1");
    }
    if (!iterate_degree(f.degree(), k, degree_cap)) {
        std::ostringstream os;
        os << "degree " << f.degree() << "^" << k << " exceeds the cap " << degree_cap;
        throw Error(ErrorKind::DegreeOverflow, os.str());
    }
    RationalMap acc = f;
    for (std::size_t i = 1; i < k; ++i) {
        acc = ratmap_compose(f, acc);
    }
    return acc;
}

bool ratmap_equal(const RationalMap& f, const RationalMap& g) {
    return f == g;
}

// ---------------------------------------------------------------------------
// Roots and critical structure

namespace {

template <class R>
NumPoint<R> finite_point(const Complex<R>& z) {
    return {z, false};
}

// Roots are located in binary128 and kept at that precision alongside the
// reported double values: squarefree factors of iterate Wronskians are far
// too ill conditioned for double Aberth.
std::vector<std::pair<WeightedPoint, NumPoint<Quad>>> roots_with_quad(const ComplexPoly& p, Mode mode) {
    std::vector<std::pair<WeightedPoint, NumPoint<Quad>>> out;
    if (p.is_zero() || *p.degree() == 0) {
        return out;
    }
    const auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const ComplexPoly& s = factors[i];
        if (s.is_zero() || *s.degree() == 0) {
            continue;
        }
        for (const auto& zq : aberth_roots(to_complex<Quad>(s))) {
            NumPoint<double> np = finite_point(Complex<double>(static_cast<double>(zq.re), static_cast<double>(zq.im)));
            PointValue pv(np);
            if (mode == Mode::Exact) {
                pv = exactify(np, [&](const SpherePoint& c) { return c.is_finite() && s(c.value()).is_zero(); });
            }
            out.push_back({{pv, i + 1}, finite_point(zq)});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const auto& x = a.first.point.approx.z;
        const auto& y = b.first.point.approx.z;
        return x.re < y.re || (x.re == y.re && x.im < y.im);
    });
    return out;
}

} // namespace

std::vector<WeightedPoint> polynomial_roots(const ComplexPoly& p, Mode mode) {
    std::vector<WeightedPoint> out;
    for (auto& r : roots_with_quad(p, mode)) {
        out.push_back(std::move(r.first));
    }
    return out;
}

ComplexPoly wronskian(const RationalMap& f) {
    return f.num().derivative() * f.den() - f.num() * f.den().derivative();
}

std::vector<PointValue> CriticalData::point_set() const {
    std::vector<PointValue> out;
    for (const auto& p : points) {
        out.push_back(p.point);
    }
    return out;
}

std::vector<PointValue> CriticalData::value_set() const {
    std::vector<PointValue> out;
    for (const auto& v : values) {
        bool seen = false;
        for (const auto& o : out) {
            if (same_point(o, v)) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            out.push_back(v);
        }
    }
    return out;
}

bool is_critical_value(const RationalMap& f, const SpherePoint& x) {
    ComplexPoly g = x.is_infinity() ? f.den() : f.num() - f.den().scaled(x.value());
    const std::size_t deg_g = g.degree_or_zero();
    if (g.is_zero()) {
        return true;
    }
    if (f.degree() >= deg_g + 2) {
        return true; // infinity is a multiple point of the fiber
    }
    if (deg_g < 2) {
        return false;
    }
    return *poly_gcd(g, g.derivative()).degree() >= 1;
}

CriticalData critical_data(const RationalMap& f, Mode mode) {
    const std::size_t d = f.degree();
    if (d < 2) {
        throw Error(ErrorKind::InvalidArgument, "critical data needs degree >= 2");
    }
    CriticalData cd;
    const ComplexPoly w = wronskian(f);
    const auto roots = roots_with_quad(w, mode);
    for (const auto& r : roots) {
        cd.points.push_back(r.first);
    }
    const std::size_t finite_weight = w.degree_or_zero();
    if (2 * d - 2 > finite_weight) {
        cd.points.push_back({PointValue(SpherePoint::infinity()), 2 * d - 2 - finite_weight});
    }
    cd.exact = std::all_of(cd.points.begin(), cd.points.end(), [](const auto& p) { return p.point.is_exact(); });

    NumericMap<Quad> nf(f);
    for (std::size_t i = 0; i < cd.points.size(); ++i) {
        const auto& p = cd.points[i];
        if (p.point.exact) {
            cd.values.emplace_back(f(*p.point.exact));
        } else {
            NumPoint<Quad> vq = nf(roots[i].second);
            NumPoint<double> v = vq.inf ? NumPoint<double>::infinity()
                                        : finite_point(Complex<double>(static_cast<double>(vq.z.re),
                                                                       static_cast<double>(vq.z.im)));
            if (mode == Mode::Exact) {
                cd.values.push_back(exactify(v, [&](const SpherePoint& x) { return is_critical_value(f, x); }));
            } else {
                cd.values.emplace_back(v);
            }
        }
    }
    cd.bicritical = cd.points.size() == 2;
    if (cd.bicritical) {
        cd.power_map = same_point_set(cd.point_set(), cd.value_set(), 1e-9);
        if (d == 2) {
            PointValue w1 = ratmap_eval(f, cd.values[0]);
            PointValue w2 = ratmap_eval(f, cd.values[1]);
            cd.critically_coalescing = same_point(w1, w2, 1e-9);
        }
    }
    return cd;
}

// ---------------------------------------------------------------------------
// Fibers and local degrees

namespace {

ComplexPoly fiber_polynomial(const RationalMap& f, const SpherePoint& w) {
    return w.is_infinity() ? f.den() : f.num() - f.den().scaled(w.value());
}

} // namespace

std::vector<WeightedPoint> fiber(const RationalMap& f, const SpherePoint& w, Mode mode) {
    ComplexPoly g = fiber_polynomial(f, w);
    std::vector<WeightedPoint> out = polynomial_roots(g, mode);
    if (mode == Mode::Exact) {
        for (const auto& p : out) {
            if (!p.point.is_exact()) {
                throw Error(ErrorKind::NotRepresentable,
                            "fiber over " + w.to_string() + " has points outside Q(i)");
            }
        }
    }
    const std::size_t deg_g = g.degree_or_zero();
    if (f.degree() > deg_g) {
        out.push_back({PointValue(SpherePoint::infinity()), f.degree() - deg_g});
    }
    return out;
}

template <class R>
std::vector<RootApprox<R>> numeric_fiber_finite(const RationalMap& f, const NumPoint<R>& w) {
    // Finite solutions of P - wQ = 0 (or Q = 0 at infinity).
    const std::size_t d = f.degree();
    std::vector<Complex<R>> c(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
        Complex<R> p = to_complex<R>(f.num().coeff(k));
        Complex<R> q = to_complex<R>(f.den().coeff(k));
        c[k] = w.inf ? q : p - w.z * q;
    }
    // Trim numerically vanishing top coefficients (degree drop: infinity in the fiber).
    R scale(0);
    for (const auto& x : c) {
        scale = std::max(scale, x.abs());
    }
    const R tiny = R(64) * unit_roundoff<R>() * scale;
    while (c.size() > 1 && c.back().abs() <= tiny) {
        c.pop_back();
    }
    if (c.size() < 2) {
        return {};
    }
    return clustered_roots(c, cluster_tolerance<R>());
}

template std::vector<RootApprox<double>> numeric_fiber_finite(const RationalMap&, const NumPoint<double>&);
template std::vector<RootApprox<Quad>> numeric_fiber_finite(const RationalMap&, const NumPoint<Quad>&);

std::vector<WeightedPoint> fiber(const RationalMap& f, const PointValue& w) {
    if (w.exact) {
        try {
            return fiber(f, *w.exact, Mode::Exact);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotRepresentable) {
                throw;
            }
            return fiber(f, *w.exact, Mode::Numeric);
        }
    }
    std::vector<WeightedPoint> out;
    std::size_t total = 0;
    for (const auto& r : numeric_fiber_finite(f, w.approx)) {
        out.push_back({PointValue(NumPoint<double>{r.z, false}), r.multiplicity});
        total += r.multiplicity;
    }
    if (total < f.degree()) {
        out.push_back({PointValue(NumPoint<double>::infinity()), f.degree() - total});
    }
    return out;
}

std::size_t local_degree(const RationalMap& f, const SpherePoint& z) {
    const ComplexPoly w = wronskian(f);
    if (w.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "local degree of a constant map");
    }
    if (z.is_infinity()) {
        return 1 + (2 * f.degree() - 2 - w.degree_or_zero());
    }
    return 1 + root_multiplicity(w, z.value());
}

std::size_t local_degree(const RationalMap& f, const PointValue& z, const CriticalData& crit, double tol) {
    if (z.exact) {
        return local_degree(f, *z.exact);
    }
    for (const auto& c : crit.points) {
        if (chordal(c.point.approx, z.approx) < tol) {
            return 1 + c.multiplicity;
        }
    }
    return 1;
}

std::size_t DegreePartition::weighted_total() const {
    std::size_t total = 0;
    std::size_t power = 1;
    for (std::size_t c : counts) {
        total += c * power;
        power *= degree;
    }
    return total;
}

DegreePartition degree_partition(const RationalMap& f, std::size_t k, const SpherePoint& z, std::size_t degree_cap) {
    if (k < 1) {
        throw Error(ErrorKind::InvalidArgument, "degree partition needs k >= 1");
    }
    if (!iterate_degree(f.degree(), k, degree_cap)) {
        throw Error(ErrorKind::DegreeOverflow, "degree partition exceeds the degree cap");
    }
    const CriticalData crit = critical_data(f, Mode::Exact);
    if (!crit.bicritical) {
        throw Error(ErrorKind::InvalidArgument, "degree partition is defined for bicritical maps");
    }
    const std::size_t d = f.degree();
    // Walk the preimage tree: the local degree of f^k at a leaf is the product
    // of local degrees of f along its forward orbit.
    struct Node {
        PointValue point;
        std::size_t local = 1;
    };
    std::vector<Node> level{{PointValue(z), 1}};
    for (std::size_t step = 0; step < k; ++step) {
        std::vector<Node> next;
        for (const auto& node : level) {
            for (const auto& pre : fiber(f, node.point)) {
                next.push_back({pre.point, node.local * pre.multiplicity});
            }
        }
        level = std::move(next);
    }
    DegreePartition dp;
    dp.degree = d;
    dp.k = k;
    dp.counts.assign(k + 1, 0);
    for (const auto& node : level) {
        std::size_t e = 0;
        std::size_t v = node.local;
        while (v > 1 && v % d == 0) {
            v /= d;
            ++e;
        }
        if (v != 1 || e > k) {
            throw Error(ErrorKind::NumericFailure, "local degree is not a power of the map degree");
        }
        dp.counts[e] += 1;
    }
    return dp;
}

// ---------------------------------------------------------------------------
// Postcritical orbits

PostcriticalOrbit postcritical_orbit(const RationalMap& f, std::size_t max_len) {
    const CriticalData crit = critical_data(f, Mode::Exact);
    if (!crit.bicritical) {
        throw Error(ErrorKind::InvalidArgument, "postcritical orbit needs a bicritical map");
    }
    NumericMap<double> nf(f);
    PostcriticalOrbit out;
    for (const auto& c : crit.points) {
        CriticalOrbit orb;
        PointValue x = c.point;
        while (orb.orbit.size() < max_len + 1) {
            for (std::size_t i = 0; i < orb.orbit.size(); ++i) {
                if (same_point(orb.orbit[i], x, 1e-9)) {
                    orb.preperiod = i;
                    orb.period = orb.orbit.size() - i;
                    break;
                }
            }
            if (orb.period) {
                break;
            }
            if (x.exact && x.exact->is_finite() && x.exact->value().height_bits() > kOrbitHeightCapBits) {
                orb.height_cap_hit = true;
                break;
            }
            orb.orbit.push_back(x);
            x = x.exact ? PointValue(f(*x.exact)) : PointValue(nf(x.approx));
        }
        if (orb.period && *orb.period == 1) {
            orb.fixed_point = orb.orbit[*orb.preperiod];
            // orbit[1] is the critical value
            orb.steps_to_fixed = *orb.preperiod >= 1 ? *orb.preperiod - 1 : 0;
        }
        out.orbits.push_back(std::move(orb));
    }
    out.postcritically_finite = std::all_of(out.orbits.begin(), out.orbits.end(),
                                            [](const CriticalOrbit& o) { return o.finite(); });
    const auto& o1 = out.orbits[0];
    const auto& o2 = out.orbits[1];
    if (o1.fixed_point && o2.fixed_point && same_point(*o1.fixed_point, *o2.fixed_point, 1e-9)) {
        out.alpha = o1.fixed_point;
        out.m = o1.steps_to_fixed;
    }
    return out;
}

} // namespace deckmap
