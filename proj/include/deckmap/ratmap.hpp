#pragma once

// Rational self-maps of the Riemann sphere with exact Q(i) coefficients.

#include "deckmap/algebra.hpp"
#include "deckmap/numeric.hpp"
#include "deckmap/sphere.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

inline constexpr std::size_t kDefaultDegreeCap = 256;
inline constexpr std::size_t kDefaultOrbitBound = 64;

/// P/Q with gcd(P, Q) = 1 and the leading coefficient of Q equal to 1.
class RationalMap {
public:
    /// Reduces by gcd and rescales; throws InvalidArgument on a zero denominator.
    RationalMap(const ComplexPoly& num, const ComplexPoly& den);

    static RationalMap identity();
    /// Skips the gcd; callers guarantee coprimality (e.g. compositions).
    static RationalMap from_coprime(const ComplexPoly& num, const ComplexPoly& den);

    const ComplexPoly& num() const { return num_; }
    const ComplexPoly& den() const { return den_; }
    std::size_t degree() const { return degree_; }

    /// Exact image; infinity handled through the reversed-coefficient chart.
    SpherePoint operator()(const SpherePoint& z) const;

    /// Parseable form "(P)/(Q)".
    std::string to_string() const;

    friend bool operator==(const RationalMap& a, const RationalMap& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    RationalMap() = default;
    void canonicalize();

    ComplexPoly num_;
    ComplexPoly den_;
    std::size_t degree_ = 0;
};

/// Floating copy of a map, evaluated in homogeneous coordinates so that
/// infinity needs no special casing.
template <class R>
class NumericMap {
public:
    explicit NumericMap(const RationalMap& f);
    NumPoint<R> operator()(const NumPoint<R>& z) const;
    std::size_t degree() const { return degree_; }

private:
    std::vector<Complex<R>> num_;
    std::vector<Complex<R>> den_;
    std::size_t degree_;
};

SpherePoint ratmap_eval(const RationalMap& f, const SpherePoint& z);
PointValue ratmap_eval(const RationalMap& f, const PointValue& z);

/// f o g
RationalMap ratmap_compose(const RationalMap& f, const RationalMap& g);

/// f^k; throws DegreeOverflow when deg(f)^k exceeds degree_cap.
RationalMap ratmap_iterate(const RationalMap& f, std::size_t k, std::size_t degree_cap = kDefaultDegreeCap);

bool ratmap_equal(const RationalMap& f, const RationalMap& g);

/// deg(f)^k, or nullopt if it exceeds cap.
std::optional<std::size_t> iterate_degree(std::size_t d, std::size_t k, std::size_t cap);

enum class Mode { Exact, Numeric };

struct WeightedPoint {
    PointValue point;
    std::size_t multiplicity = 1;
};

/// Distinct roots of an exact polynomial with multiplicities. In exact mode
/// each root is snapped to Q(i) and verified by exact evaluation; roots that
/// fail stay numeric.
std::vector<WeightedPoint> polynomial_roots(const ComplexPoly& p, Mode mode);

struct CriticalData {
    /// Distinct critical points; multiplicity is the order in the critical divisor.
    std::vector<WeightedPoint> points;
    /// values[i] = f(points[i].point)
    std::vector<PointValue> values;
    /// Every point was certified exactly.
    bool exact = false;
    bool bicritical = false;
    /// Meaningful for bicritical quadratic maps only.
    std::optional<bool> critically_coalescing;
    /// Bicritical with the same set of critical points and critical values.
    bool power_map = false;

    std::vector<PointValue> point_set() const;
    /// Distinct critical values.
    std::vector<PointValue> value_set() const;
};

/// Wronskian W = P'Q - PQ'.
ComplexPoly wronskian(const RationalMap& f);

/// Throws InvalidArgument when deg(f) < 2.
CriticalData critical_data(const RationalMap& f, Mode mode = Mode::Exact);

/// Exact test that x is a critical value: the fiber over x has a multiple point.
bool is_critical_value(const RationalMap& f, const SpherePoint& x);

/// Solutions of f(z) = w with multiplicity. Exact mode throws NotRepresentable
/// if a solution is irrational.
std::vector<WeightedPoint> fiber(const RationalMap& f, const SpherePoint& w, Mode mode = Mode::Exact);

/// Numeric fiber over a floating point, multiplicities from clustering.
template <class R>
std::vector<RootApprox<R>> numeric_fiber_finite(const RationalMap& f, const NumPoint<R>& w);
std::vector<WeightedPoint> fiber(const RationalMap& f, const PointValue& w);

std::size_t local_degree(const RationalMap& f, const SpherePoint& z);
/// Numeric points are matched against the critical points in `crit`.
std::size_t local_degree(const RationalMap& f, const PointValue& z, const CriticalData& crit, double tol = 1e-6);

struct DegreePartition {
    /// counts[i] = number of points of the fiber of f^k with local degree d^i.
    std::vector<std::size_t> counts;
    std::size_t degree = 0;
    std::size_t k = 0;

    /// sum_i counts[i] d^i, which must equal d^k.
    std::size_t weighted_total() const;
};

DegreePartition degree_partition(const RationalMap& f, std::size_t k, const SpherePoint& z,
                                 std::size_t degree_cap = kDefaultDegreeCap);

struct CriticalOrbit {
    /// c, f(c), f^2(c), ... up to the first repeat (exclusive) or the bound.
    std::vector<PointValue> orbit;
    std::optional<std::size_t> preperiod;
    std::optional<std::size_t> period;
    /// Orbit entered a fixed point; steps_to_fixed counts from the critical value f(c).
    std::optional<PointValue> fixed_point;
    std::optional<std::size_t> steps_to_fixed;
    bool height_cap_hit = false;

    bool finite() const { return period.has_value(); }
};

struct PostcriticalOrbit {
    std::vector<CriticalOrbit> orbits;
    bool postcritically_finite = false;
    /// Common fixed point alpha reached by both critical values, if any, and
    /// the least m with f^m(v1) = alpha.
    std::optional<PointValue> alpha;
    std::optional<std::size_t> m;
};

/// Exact iteration stops early when a coordinate grows past this many bits.
inline constexpr std::size_t kOrbitHeightCapBits = 16384;

PostcriticalOrbit postcritical_orbit(const RationalMap& f, std::size_t max_len = kDefaultOrbitBound);

} // namespace deckmap
