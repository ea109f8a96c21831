#include "deckmap/numeric.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace deckmap {

ComplexFloat::ComplexFloat(double re, double im) : z_(re, im) {
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw Error(ErrorKind::InvalidArgument, "ComplexFloat components must be finite");
    }
}

template <>
double to_real<double>(const Rational& q) {
    return q.get_d();
}

Rational exact_rational(double x) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::InvalidArgument, "cannot convert a non-finite float to a rational");
    }
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

template <>
Quad to_real<Quad>(const Rational& q) {
    // Three doubles carry more than 113 significant bits.
    double hi = q.get_d();
    Rational r1 = q - exact_rational(hi);
    double mid = r1.get_d();
    Rational r2 = r1 - exact_rational(mid);
    double lo = r2.get_d();
    return Quad(hi) + Quad(mid) + Quad(lo);
}

Rational exact_rational(const Quad& x) {
    double hi = static_cast<double>(x);
    Quad r1 = x - Quad(hi);
    double mid = static_cast<double>(r1);
    Quad r2 = r1 - Quad(mid);
    double lo = static_cast<double>(r2);
    return exact_rational(hi) + exact_rational(mid) + exact_rational(lo);
}

namespace {

template <class R>
R pi() {
    return boost::math::constants::pi<R>();
}

template <class R>
struct Eval {
    Complex<R> p;
    Complex<R> dp;
    R bound; // sum |a_i| |z|^i
};

template <class R>
Eval<R> eval_with_derivative(const std::vector<Complex<R>>& a, const Complex<R>& z) {
    Complex<R> p;
    Complex<R> dp;
    R bound(0);
    const R az = z.abs();
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
        bound = bound * az + it->abs();
    }
    return {p, dp, bound};
}

template <class R>
std::string describe(const Complex<R>& z) {
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(z.re) << (z.im < R(0) ? "" : "+") << static_cast<double>(z.im) << "i";
    return os.str();
}

// Core iteration. Returns approximations; `converged` reports whether every
// root met the backward-error stopping rule.
template <class R>
std::vector<Complex<R>> aberth_iterate(const std::vector<Complex<R>>& a, const RootOptions& opts,
                                       bool& converged, std::size_t& iterations, R& worst_residual) {
    using std::pow;
    using std::cos;
    using std::sin;
    const std::size_t n = a.size() - 1;
    const R u = unit_roundoff<R>();

    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli.
    R radius = pow((a[0] / a[n]).abs(), R(1) / R(static_cast<double>(n)));
    if (!(radius > R(0))) {
        radius = R(1);
    }
    std::vector<Complex<R>> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        R theta = R(2) * pi<R>() * R(static_cast<double>(j)) / R(static_cast<double>(n)) + R(0.7);
        z[j] = Complex<R>(radius * cos(theta), radius * sin(theta));
    }

    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    iterations = 0;
    while (remaining > 0 && iterations < opts.max_iterations) {
        ++iterations;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) {
                continue;
            }
            Eval<R> e = eval_with_derivative(a, z[j]);
            if (e.p.abs() <= R(4) * R(static_cast<double>(n)) * u * e.bound) {
                done[j] = true;
                --remaining;
                continue;
            }
            Complex<R> ratio = e.p / e.dp;
            Complex<R> sum;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) {
                    Complex<R> diff = z[j] - z[k];
                    if (diff.norm() > R(0)) {
                        sum += Complex<R>(R(1)) / diff;
                    }
                }
            }
            Complex<R> w = ratio / (Complex<R>(R(1)) - ratio * sum);
            if (!w.finite()) {
                // Derivative underflow next to a multiple root; nudge.
                w = Complex<R>(u * (R(1) + z[j].abs()), u);
            }
            z[j] -= w;
            if (w.abs() <= R(2) * u * z[j].abs()) {
                done[j] = true;
                --remaining;
            }
        }
    }
    converged = remaining == 0;
    worst_residual = R(0);
    for (const auto& zj : z) {
        Eval<R> e = eval_with_derivative(a, zj);
        R rel = e.bound > R(0) ? e.p.abs() / e.bound : R(0);
        worst_residual = std::max(worst_residual, rel);
    }
    return z;
}

template <class R>
void validate(const std::vector<Complex<R>>& coeffs) {
    if (coeffs.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "root finding needs degree >= 1");
    }
    if (coeffs.back().norm() == R(0)) {
        throw Error(ErrorKind::InvalidArgument, "root finding needs a nonzero leading coefficient");
    }
    for (const auto& c : coeffs) {
        if (!c.finite()) {
            throw Error(ErrorKind::InvalidArgument, "non-finite polynomial coefficient");
        }
    }
}

template <class R>
bool lex_before(const Complex<R>& a, const Complex<R>& b) {
    return a.re < b.re || (a.re == b.re && a.im < b.im);
}

} // namespace

template <class R>
std::vector<Complex<R>> aberth_roots(const std::vector<Complex<R>>& coeffs, const RootOptions& opts) {
    validate(coeffs);
    std::size_t zeros = 0;
    while (coeffs[zeros].norm() == R(0)) {
        ++zeros;
    }
    std::vector<Complex<R>> a(coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), coeffs.end());
    std::vector<Complex<R>> roots(zeros, Complex<R>());
    const std::size_t n = a.size() - 1;
    if (n == 0) {
        return roots;
    }
    if (n == 1) {
        roots.push_back(-a[0] / a[1]);
        return roots;
    }
    bool converged = false;
    std::size_t iterations = 0;
    R worst(0);
    auto z = aberth_iterate(a, opts, converged, iterations, worst);
    const R bound = R(64) * R(static_cast<double>(n)) * unit_roundoff<R>();
    if (!converged || worst > bound) {
        std::ostringstream os;
        os << "Aberth iteration failed: degree " << n << ", " << iterations
           << " iterations, worst relative residual " << static_cast<double>(worst) << " (bound "
           << static_cast<double>(bound) << "), sample root " << describe(z.front());
        throw Error(ErrorKind::NumericFailure, os.str());
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

template <class R>
std::vector<RootApprox<R>> clustered_roots(const std::vector<Complex<R>>& coeffs, R tol, const RootOptions& opts) {
    validate(coeffs);
    std::size_t zeros = 0;
    while (coeffs[zeros].norm() == R(0)) {
        ++zeros;
    }
    std::vector<Complex<R>> a(coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), coeffs.end());
    std::vector<Complex<R>> pts(zeros, Complex<R>());
    const std::size_t n = a.size() - 1;
    if (n == 1) {
        pts.push_back(-a[0] / a[1]);
    } else if (n > 1) {
        bool converged = false;
        std::size_t iterations = 0;
        R worst(0);
        auto z = aberth_iterate(a, opts, converged, iterations, worst);
        pts.insert(pts.end(), z.begin(), z.end());
    }
    // Single-linkage clustering.
    std::vector<std::size_t> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            R scale = std::max(R(1), std::max(pts[i].abs(), pts[j].abs()));
            if ((pts[i] - pts[j]).abs() < tol * scale) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<RootApprox<R>> out;
    std::vector<std::size_t> slot(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t r = find(i);
        if (slot[r] == pts.size()) {
            slot[r] = out.size();
            out.push_back({Complex<R>(), 0});
        }
        auto& c = out[slot[r]];
        c.z += pts[i];
        c.multiplicity += 1;
    }
    for (auto& c : out) {
        c.z = c.z / Complex<R>(R(static_cast<double>(c.multiplicity)));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return lex_before(x.z, y.z); });
    return out;
}

template <class R>
std::vector<RootApprox<R>> poly_roots(const ComplexPoly& p, const RootOptions& opts) {
    if (p.is_zero() || *p.degree() < 1) {
        throw Error(ErrorKind::InvalidArgument, "poly_roots needs degree >= 1");
    }
    std::vector<RootApprox<R>> out;
    const auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].is_zero() || *factors[i].degree() == 0) {
            continue;
        }
        for (const auto& z : aberth_roots(to_complex<R>(factors[i]), opts)) {
            out.push_back({z, i + 1});
        }
    }
    // Merge numerically coincident roots from different factors.
    const R tol = cluster_tolerance<R>();
    std::vector<RootApprox<R>> merged;
    for (const auto& r : out) {
        bool joined = false;
        for (auto& m : merged) {
            R scale = std::max(R(1), std::max(r.z.abs(), m.z.abs()));
            if ((m.z - r.z).abs() < tol * scale) {
                m.multiplicity += r.multiplicity;
                joined = true;
                break;
            }
        }
        if (!joined) {
            merged.push_back(r);
        }
    }
    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return lex_before(x.z, y.z); });
    return merged;
}

std::vector<RootApprox<Quad>> poly_roots_numeric(const ComplexPoly& p, int precision_bits) {
    return with_precision(precision_bits, [&](auto tag) {
        using R = decltype(tag);
        std::vector<RootApprox<Quad>> out;
        for (const auto& r : poly_roots<R>(p)) {
            out.push_back({Complex<Quad>(Quad(r.z.re), Quad(r.z.im)), r.multiplicity});
        }
        return out;
    });
}

template std::vector<Complex<double>> aberth_roots(const std::vector<Complex<double>>&, const RootOptions&);
template std::vector<Complex<Quad>> aberth_roots(const std::vector<Complex<Quad>>&, const RootOptions&);
template std::vector<RootApprox<double>> clustered_roots(const std::vector<Complex<double>>&, double,
                                                         const RootOptions&);
template std::vector<RootApprox<Quad>> clustered_roots(const std::vector<Complex<Quad>>&, Quad, const RootOptions&);
template std::vector<RootApprox<double>> poly_roots<double>(const ComplexPoly&, const RootOptions&);
template std::vector<RootApprox<Quad>> poly_roots<Quad>(const ComplexPoly&, const RootOptions&);

// ---------------------------------------------------------------------------
// Snapping

Rational limit_denominator(const Rational& x, const mpz_class& max_den) {
    if (max_den < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_den must be >= 1");
    }
    if (x.get_den() <= max_den) {
        return x;
    }
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpz_class n = x.get_num();
    mpz_class d = x.get_den();
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        mpz_class q2 = q0 + a * q1;
        if (q2 > max_den) {
            break;
        }
        mpz_class p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpz_class r = n - a * d;
        n = d;
        d = r;
        if (d == 0) {
            break;
        }
    }
    mpz_class k = (max_den - q0) / q1;
    Rational bound1(p0 + k * p1, q0 + k * q1);
    Rational bound2(p1, q1);
    bound1.canonicalize();
    bound2.canonicalize();
    return abs(bound2 - x) <= abs(bound1 - x) ? bound2 : bound1;
}

namespace {

template <class R>
std::optional<GaussianRational> snap_impl(const Complex<R>& x, long max_den, int precision_bits) {
    using std::pow;
    if (max_den < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_den must be >= 1");
    }
    if (!x.finite()) {
        return std::nullopt;
    }
    mpz_class md(max_den);
    Rational re = limit_denominator(exact_rational(x.re), md);
    Rational im = limit_denominator(exact_rational(x.im), md);
    GaussianRational g(re, im);
    Complex<R> back = to_complex<R>(g);
    R tol = pow(R(2), -R(precision_bits) / 2);
    if ((back - x).abs() <= tol) {
        return g;
    }
    return std::nullopt;
}

} // namespace

std::optional<GaussianRational> snap_to_exact(const Complex<double>& x, long max_den, int precision_bits) {
    return snap_impl(x, max_den, precision_bits);
}

std::optional<GaussianRational> snap_to_exact(const Complex<Quad>& x, long max_den, int precision_bits) {
    return snap_impl(x, max_den, precision_bits);
}

} // namespace deckmap
