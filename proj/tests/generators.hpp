#pragma once

// Hand-rolled random generators for property tests.

#include "deckmap/algebra.hpp"
#include "deckmap/mobius.hpp"
#include "deckmap/ratmap.hpp"

#include <random>

namespace gen {

using deckmap::ComplexPoly;
using deckmap::GaussianRational;
using deckmap::MobiusTransform;
using deckmap::Rational;
using deckmap::RationalMap;

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational rational(Rng& rng, long max_num, long max_den) {
    Rational q(uniform(rng, -max_num, max_num), uniform(rng, 1, max_den));
    q.canonicalize();
    return q;
}

inline GaussianRational gaussian(Rng& rng, long max_num = 9, long max_den = 5, bool complex = true) {
    return {rational(rng, max_num, max_den), complex ? rational(rng, max_num, max_den) : Rational(0)};
}

inline GaussianRational nonzero_gaussian(Rng& rng, long max_num = 9, long max_den = 5, bool complex = true) {
    for (;;) {
        GaussianRational g = gaussian(rng, max_num, max_den, complex);
        if (!g.is_zero()) {
            return g;
        }
    }
}

inline ComplexPoly poly(Rng& rng, std::size_t max_degree, long max_num = 9) {
    std::vector<GaussianRational> c;
    std::size_t n = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_degree)));
    for (std::size_t k = 0; k <= n; ++k) {
        c.push_back(gaussian(rng, max_num, 4));
    }
    return ComplexPoly(c);
}

/// Small integer Mobius map, nonsingular.
inline MobiusTransform mobius(Rng& rng, long bound = 3, bool complex = false) {
    for (;;) {
        auto e = [&] {
            return GaussianRational(Rational(uniform(rng, -bound, bound)),
                                    Rational(complex ? uniform(rng, -1, 1) : 0));
        };
        GaussianRational a = e(), b = e(), c = e(), d = e();
        if (!(a * d - b * c).is_zero()) {
            return {a, b, c, d};
        }
    }
}

inline RationalMap power_map(std::size_t d) {
    return RationalMap(ComplexPoly::monomial(1, d), ComplexPoly::constant(1));
}

/// f_a(z) = (z^2 - a)/(z^2 + a)
inline RationalMap f_a(const GaussianRational& a) {
    return RationalMap(ComplexPoly({-a, 0, 1}), ComplexPoly({a, 0, 1}));
}

/// f_c(z) = c(z + 1/z)
inline RationalMap f_sigma(const GaussianRational& c) {
    return RationalMap(ComplexPoly({c, 0, c}), ComplexPoly({0, 1}));
}

/// M1 o z^d o M2 with rational critical points M2^{-1}(0), M2^{-1}(inf).
inline RationalMap bicritical(Rng& rng, std::size_t d, bool complex = false) {
    MobiusTransform m1 = mobius(rng, 3, complex);
    MobiusTransform m2 = mobius(rng, 3, complex);
    return deckmap::ratmap_compose(m1.to_map(), deckmap::ratmap_compose(power_map(d), m2.to_map()));
}

/// Conjugate of f_a by a small Mobius map; critically coalescing, not a power map.
inline RationalMap coalescing(Rng& rng) {
    GaussianRational a;
    do {
        a = nonzero_gaussian(rng, 7, 3, false);
    } while (a == GaussianRational(1) || a == GaussianRational(-1));
    return deckmap::conjugate(f_a(a), mobius(rng, 2));
}

} // namespace gen
