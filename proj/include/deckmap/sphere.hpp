#pragma once

// Points of the Riemann sphere: exact (Q(i) or infinity) and floating.

#include "deckmap/algebra.hpp"
#include "deckmap/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace deckmap {

class SpherePoint {
public:
    SpherePoint() : value_(GaussianRational(0)) {}
    SpherePoint(GaussianRational z) : value_(std::move(z)) {} // NOLINT(google-explicit-constructor)
    SpherePoint(long z) : value_(GaussianRational(z)) {}       // NOLINT(google-explicit-constructor)

    static SpherePoint infinity() {
        SpherePoint p;
        p.value_.reset();
        return p;
    }
    /// "inf" or a GaussianRational string.
    static SpherePoint from_string(const std::string& text);

    bool is_infinity() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }
    /// Throws InvalidArgument at infinity.
    const GaussianRational& value() const;

    std::string to_string() const { return value_ ? value_->to_string() : "inf"; }
    friend bool operator==(const SpherePoint& a, const SpherePoint& b) = default;

private:
    std::optional<GaussianRational> value_;
};

/// Deterministic order: finite points lexicographically, infinity last.
bool sphere_less(const SpherePoint& a, const SpherePoint& b);

template <class R>
struct NumPoint {
    Complex<R> z;
    bool inf = false;

    static NumPoint infinity() { return {Complex<R>(), true}; }
    static NumPoint from(const SpherePoint& p) {
        if (p.is_infinity()) {
            return infinity();
        }
        return {to_complex<R>(p.value()), false};
    }
    template <class S>
    NumPoint<S> cast() const {
        return {z.template cast<S>(), inf};
    }
};

/// Chordal distance on the sphere (diameter 2).
template <class R>
R chordal(const NumPoint<R>& a, const NumPoint<R>& b) {
    using std::sqrt;
    if (a.inf && b.inf) {
        return R(0);
    }
    if (a.inf) {
        return R(2) / sqrt(R(1) + b.z.norm());
    }
    if (b.inf) {
        return R(2) / sqrt(R(1) + a.z.norm());
    }
    return R(2) * (a.z - b.z).abs() / sqrt((R(1) + a.z.norm()) * (R(1) + b.z.norm()));
}

/// A point known numerically, and exactly when that was possible.
struct PointValue {
    NumPoint<double> approx;
    std::optional<SpherePoint> exact;

    PointValue() = default;
    PointValue(const SpherePoint& p) : approx(NumPoint<double>::from(p)), exact(p) {} // NOLINT
    explicit PointValue(const NumPoint<double>& p) : approx(p) {}

    bool is_exact() const { return exact.has_value(); }
    bool is_infinity() const { return exact ? exact->is_infinity() : approx.inf; }
    std::string to_string() const;
};

/// Exact comparison when both are exact, chordal distance < tol otherwise.
bool same_point(const PointValue& a, const PointValue& b, double tol = 1e-7);

/// Set equality of small point lists under same_point.
bool same_point_set(const std::vector<PointValue>& a, const std::vector<PointValue>& b, double tol = 1e-7);

/// Tries to upgrade a numeric point to an exact one that satisfies `verify`.
template <class Verify>
PointValue exactify(const NumPoint<double>& p, Verify&& verify, long max_den = 1000000) {
    if (p.inf || p.z.abs() > 1e12) {
        SpherePoint cand = SpherePoint::infinity();
        if (verify(cand)) {
            return PointValue(cand);
        }
        return PointValue(p);
    }
    if (auto g = snap_to_exact(p.z, max_den, 53)) {
        SpherePoint cand(*g);
        if (verify(cand)) {
            return PointValue(cand);
        }
    }
    return PointValue(p);
}

} // namespace deckmap
