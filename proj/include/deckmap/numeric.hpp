#pragma once

// Floating-point layer: a small complex type usable with double and binary128,
// simultaneous-iteration polynomial root finding, and snapping of floats back
// to Q(i).

#include "deckmap/algebra.hpp"
#include "deckmap/error.hpp"

#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

namespace deckmap {

using Quad = boost::multiprecision::float128;

template <class R>
struct Complex {
    R re{0};
    R im{0};

    constexpr Complex() = default;
    constexpr Complex(R r, R i = R(0)) : re(std::move(r)), im(std::move(i)) {} // NOLINT

    Complex operator-() const { return {-re, -im}; }
    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        R r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        // Smith's algorithm
        using std::abs;
        if (abs(o.re) >= abs(o.im)) {
            R t = o.im / o.re;
            R den = o.re + o.im * t;
            R r = (re + im * t) / den;
            im = (im - re * t) / den;
            re = r;
        } else {
            R t = o.re / o.im;
            R den = o.re * t + o.im;
            R r = (re * t + im) / den;
            im = (im * t - re) / den;
            re = r;
        }
        return *this;
    }
    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }

    Complex conj() const { return {re, -im}; }
    R norm() const { return re * re + im * im; }
    R abs() const {
        using std::hypot;
        return hypot(re, im);
    }
    bool finite() const {
        using std::isfinite;
        return isfinite(re) && isfinite(im);
    }

    template <class S>
    Complex<S> cast() const {
        return {static_cast<S>(re), static_cast<S>(im)};
    }
};

template <class R>
Complex<R> complex_sqrt(const Complex<R>& z) {
    using std::sqrt;
    R m = z.abs();
    if (m == R(0)) {
        return {};
    }
    R x = sqrt((m + z.re) / 2);
    R y = sqrt((m - z.re) / 2);
    if (z.im < R(0)) {
        y = -y;
    }
    return {x, y};
}

/// Finite complex number; the construction-checked form of Complex<double>.
class ComplexFloat {
public:
    ComplexFloat(double re, double im);
    explicit ComplexFloat(const Complex<double>& z) : ComplexFloat(z.re, z.im) {}
    const Complex<double>& value() const { return z_; }
    double re() const { return z_.re; }
    double im() const { return z_.im; }

private:
    Complex<double> z_;
};

/// Unit roundoff for the working type.
template <class R>
R unit_roundoff() {
    return std::numeric_limits<R>::epsilon() / 2;
}

template <class R>
constexpr int mantissa_bits() {
    return std::numeric_limits<R>::digits;
}

/// Runs fn with a value-initialized tag of the floating type matching the
/// requested precision: <= 53 bits -> double, <= 113 bits -> binary128.
template <class Fn>
decltype(auto) with_precision(int bits, Fn&& fn) {
    if (bits < 2) {
        throw Error(ErrorKind::InvalidArgument, "precision must be at least 2 bits");
    }
    if (bits <= 53) {
        return fn(double{});
    }
    if (bits <= 113) {
        return fn(Quad{});
    }
    throw Error(ErrorKind::InvalidArgument,
                "precision above 113 bits is not supported (requested " + std::to_string(bits) + ")");
}

template <class R>
R to_real(const Rational& q);
template <>
double to_real<double>(const Rational& q);
template <>
Quad to_real<Quad>(const Rational& q);

template <class R>
Complex<R> to_complex(const GaussianRational& z) {
    return {to_real<R>(z.re()), to_real<R>(z.im())};
}

template <class R>
std::vector<Complex<R>> to_complex(const ComplexPoly& p) {
    std::vector<Complex<R>> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) {
        out.push_back(to_complex<R>(c));
    }
    return out;
}

/// Exact rational value of a finite float.
Rational exact_rational(double x);
Rational exact_rational(const Quad& x);

template <class R>
Complex<R> horner(const std::vector<Complex<R>>& coeffs, const Complex<R>& z) {
    Complex<R> acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

template <class R>
struct RootApprox {
    Complex<R> z;
    std::size_t multiplicity = 1;
};

struct RootOptions {
    std::size_t max_iterations = 2000;
};

/// Aberth-Ehrlich iteration for a polynomial with complex coefficients whose
/// roots are (numerically) simple. Throws NumericFailure if it does not
/// converge. Leading coefficient must be nonzero; roots at 0 are handled.
template <class R>
std::vector<Complex<R>> aberth_roots(const std::vector<Complex<R>>& coeffs, const RootOptions& opts = {});

/// As aberth_roots, but tolerates multiple roots: iterates to the best
/// attainable accuracy and merges approximations closer than tol into
/// clusters whose size is the multiplicity.
template <class R>
std::vector<RootApprox<R>> clustered_roots(const std::vector<Complex<R>>& coeffs, R tol,
                                           const RootOptions& opts = {});

/// Roots of an exact polynomial with multiplicities. Multiplicities come from
/// the exact square-free decomposition; approximations closer than
/// 2^(-bits/3) are merged afterwards. Residuals satisfy
/// |s(r)| <= 64 n u sum|s_i||r|^i for the square-free factor s containing r.
template <class R>
std::vector<RootApprox<R>> poly_roots(const ComplexPoly& p, const RootOptions& opts = {});

/// Runtime-precision entry point; values are widened to binary128.
std::vector<RootApprox<Quad>> poly_roots_numeric(const ComplexPoly& p, int precision_bits);

/// Tolerance below which roots are treated as one cluster.
template <class R>
R cluster_tolerance() {
    using std::pow;
    return pow(R(2), -R(mantissa_bits<R>()) / 3);
}

/// Closest rational with denominator <= max_den (continued fractions).
Rational limit_denominator(const Rational& x, const mpz_class& max_den);

/// Nearest Gaussian rational with both denominators <= max_den, if it lies
/// within 2^(-precision/2) of x.
std::optional<GaussianRational> snap_to_exact(const Complex<double>& x, long max_den, int precision_bits = 53);
std::optional<GaussianRational> snap_to_exact(const Complex<Quad>& x, long max_den, int precision_bits = 113);

} // namespace deckmap
