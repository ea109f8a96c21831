#pragma once

// Exact arithmetic over Q(i) and univariate polynomials with Gaussian-rational
// coefficients.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

using Rational = mpq_class;

class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {} // NOLINT(google-explicit-constructor)
    GaussianRational(Rational re, Rational im = 0);

    static GaussianRational i() { return {0, 1}; }
    /// Parses "p", "p/q" or "p/q+r/si" style strings as produced by to_string().
    static GaussianRational from_string(const std::string& text);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    GaussianRational inverse() const;

    /// Exact square root in Q(i) when one exists.
    std::optional<GaussianRational> sqrt() const;

    GaussianRational operator-() const { return {-re_, -im_}; }
    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Lexicographic (re, im) order; only used to make outputs deterministic.
    friend bool lex_less(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ < b.re_ || (a.re_ == b.re_ && a.im_ < b.im_);
    }

    /// Exact decimal-free form: "-17/19", "1/2+3/4i", "-i".
    std::string to_string() const;
    double re_double() const { return re_.get_d(); }
    double im_double() const { return im_.get_d(); }

    /// max(bit length of numerators and denominators); a crude height.
    std::size_t height_bits() const;

private:
    Rational re_{0};
    Rational im_{0};
};

/// Polynomial with Gaussian-rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients and no degree.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<GaussianRational> coeffs);
    ComplexPoly(std::initializer_list<GaussianRational> coeffs);

    static ComplexPoly constant(const GaussianRational& c) { return ComplexPoly({c}); }
    static ComplexPoly monomial(const GaussianRational& c, std::size_t power);
    /// z - root
    static ComplexPoly linear_factor(const GaussianRational& root);

    bool is_zero() const { return coeffs_.empty(); }
    /// nullopt is the degree of the zero polynomial.
    std::optional<std::size_t> degree() const;
    /// Degree with the zero polynomial mapped to 0; for sizing only.
    std::size_t degree_or_zero() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
    /// Coefficient of z^k (zero past the end).
    GaussianRational coeff(std::size_t k) const;
    const GaussianRational& leading() const;

    GaussianRational operator()(const GaussianRational& z) const;

    ComplexPoly derivative() const;
    ComplexPoly monic() const;
    ComplexPoly scaled(const GaussianRational& c) const;
    /// Coefficients reversed with respect to the given degree, i.e. z^n p(1/z).
    ComplexPoly reversed(std::size_t n) const;

    ComplexPoly operator-() const { return scaled(GaussianRational(-1)); }
    friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b);
    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
    friend bool operator==(const ComplexPoly& a, const ComplexPoly& b) = default;

    std::string to_string(const std::string& var = "z") const;

private:
    void trim();
    std::vector<GaussianRational> coeffs_;
};

enum class PolyOp { Add, Sub, Mul };

ComplexPoly poly_arith(const ComplexPoly& a, const ComplexPoly& b, PolyOp op);

struct PolyDivision {
    ComplexPoly quotient;
    ComplexPoly remainder;
};

/// Euclidean division; throws InvalidArgument on a zero divisor.
PolyDivision poly_divmod(const ComplexPoly& a, const ComplexPoly& b);

/// Monic gcd; throws InvalidArgument when both inputs are zero.
ComplexPoly poly_gcd(const ComplexPoly& a, const ComplexPoly& b);

/// Exact quotient a / b; throws InternalError if b does not divide a.
ComplexPoly poly_exact_div(const ComplexPoly& a, const ComplexPoly& b);

struct HomogeneousPair {
    ComplexPoly num;
    ComplexPoly den;
};

/// Homogenized substitution z <- num/den:
/// returns sum_i c_i num^i den^(n-i) with n = homog_degree (default: deg outer).
/// The pair (num, den) is not reduced; the result's second entry is den^n.
HomogeneousPair poly_compose(const ComplexPoly& outer, const ComplexPoly& num,
                             const ComplexPoly& den);

/// Sum_i c_i num^i den^(n-i) for an explicit homogenizing degree n >= deg(outer).
ComplexPoly poly_homogeneous_substitute(const ComplexPoly& outer, const ComplexPoly& num,
                                        const ComplexPoly& den, std::size_t n);

/// Yun's square-free decomposition: p = lc * prod factors[i]^(i+1), each factor
/// monic and square-free (empty factors are the constant 1).
std::vector<ComplexPoly> squarefree_decomposition(const ComplexPoly& p);

/// Order of vanishing of p at z (0 if p(z) != 0). p must be nonzero.
std::size_t root_multiplicity(const ComplexPoly& p, const GaussianRational& z);

} // namespace deckmap
