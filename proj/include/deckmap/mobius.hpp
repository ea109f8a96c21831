#pragma once

// Mobius transformations and finite groups of them.

#include "deckmap/algebra.hpp"
#include "deckmap/numeric.hpp"
#include "deckmap/ratmap.hpp"
#include "deckmap/sphere.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

/// z -> (az+b)/(cz+d), stored with the first nonzero entry equal to 1.
class MobiusTransform {
public:
    MobiusTransform(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d);

    static MobiusTransform identity();
    /// The unique transform sending p[i] to q[i]; points must be distinct.
    static MobiusTransform from_triples(const std::array<SpherePoint, 3>& p, const std::array<SpherePoint, 3>& q);
    /// Sends (z1, z2, z3) to (0, inf, 1).
    static MobiusTransform chart(const SpherePoint& z1, const SpherePoint& z2, const SpherePoint& z3);
    /// Throws InvalidArgument unless deg(f) = 1.
    static MobiusTransform from_map(const RationalMap& f);

    const GaussianRational& a() const { return a_; }
    const GaussianRational& b() const { return b_; }
    const GaussianRational& c() const { return c_; }
    const GaussianRational& d() const { return d_; }
    std::array<GaussianRational, 4> entries() const { return {a_, b_, c_, d_}; }

    GaussianRational det() const { return a_ * d_ - b_ * c_; }
    MobiusTransform inverse() const;
    bool is_identity() const;
    SpherePoint operator()(const SpherePoint& z) const;
    RationalMap to_map() const;
    /// "(a*z + b)/(c*z + d)" in parseable form.
    std::string to_string() const;

    friend bool operator==(const MobiusTransform& s, const MobiusTransform& t);

private:
    void canonicalize();
    GaussianRational a_, b_, c_, d_;
};

/// s o t
MobiusTransform mobius_compose(const MobiusTransform& s, const MobiusTransform& t);
MobiusTransform mobius_power(const MobiusTransform& t, std::size_t n);

struct FixedPoints {
    std::vector<PointValue> points;
    bool exact = false;
};

/// Throws InvalidArgument on the identity.
FixedPoints mobius_fixed_points(const MobiusTransform& t);

/// Least n <= max_order with t^n = id.
std::optional<std::size_t> mobius_order(const MobiusTransform& t, std::size_t max_order);

/// phi^{-1} o f o phi
RationalMap conjugate(const RationalMap& f, const MobiusTransform& phi);

// ---------------------------------------------------------------------------
// Numeric transforms

template <class R>
struct NumMobius {
    std::array<Complex<R>, 4> m{Complex<R>(R(1)), Complex<R>(), Complex<R>(), Complex<R>(R(1))};

    static NumMobius identity() { return {}; }
    static NumMobius from(const MobiusTransform& t);
    /// Sends (z1, z2, z3) to (0, inf, 1); points must be distinct.
    static NumMobius chart(const NumPoint<R>& z1, const NumPoint<R>& z2, const NumPoint<R>& z3);
    static NumMobius from_triples(const std::array<NumPoint<R>, 3>& p, const std::array<NumPoint<R>, 3>& q);

    NumPoint<R> operator()(const NumPoint<R>& z) const;
    NumMobius inverse() const;
    /// Scaled so the largest entry is 1.
    NumMobius normalized() const;
    template <class S>
    NumMobius<S> cast() const {
        NumMobius<S> out;
        for (int i = 0; i < 4; ++i) {
            out.m[i] = m[i].template cast<S>();
        }
        return out;
    }
};

template <class R>
NumMobius<R> compose(const NumMobius<R>& s, const NumMobius<R>& t);

/// Scale-invariant distance: max |s_i t_j - s_j t_i| / (|s||t|).
template <class R>
R projective_distance(const NumMobius<R>& s, const NumMobius<R>& t);

template <class R>
std::vector<NumPoint<R>> numeric_fixed_points(const NumMobius<R>& t);

/// Snaps the normalized entries to Q(i).
template <class R>
std::optional<MobiusTransform> snap_mobius(const NumMobius<R>& t, long max_den, int precision_bits);

// ---------------------------------------------------------------------------
// Finite groups

enum class GroupKind { Cyclic, Dihedral, V4, A4, S4, A5 };

struct IsoType {
    GroupKind kind = GroupKind::Cyclic;
    std::size_t order = 1;

    /// "Cyclic(8)", "Dihedral(8)", "V4", "A4", "S4", "A5".
    std::string to_string() const;
    bool polyhedral() const { return kind == GroupKind::A4 || kind == GroupKind::S4 || kind == GroupKind::A5; }
    friend bool operator==(const IsoType&, const IsoType&) = default;
};

/// Multiplication table over element indices; table[i][j] = index of e_i e_j.
using CayleyTable = std::vector<std::vector<std::size_t>>;

struct Classification {
    IsoType iso;
    std::vector<std::size_t> orders;
    /// Dihedral witness: rotation generating the index-2 cyclic subgroup and
    /// an involution outside it that inverts the rotation.
    std::optional<std::size_t> rotation;
    std::optional<std::size_t> reflection;
};

/// Throws InternalError if the table is not one of the finite Mobius group types.
Classification classify_group(const CayleyTable& table, std::size_t identity);

struct GroupElement {
    std::optional<MobiusTransform> exact;
    NumMobius<double> approx;
    std::size_t order = 1;
    /// Exactly verified for the defining identity of the group it belongs to.
    bool certified = false;

    std::string to_string() const;
};

struct MobiusGroup {
    /// Canonical order: identity first, then by element order, then by coefficients.
    std::vector<GroupElement> elements;
    IsoType iso;
    std::optional<std::size_t> rotation;
    std::optional<std::size_t> reflection;

    std::size_t size() const { return elements.size(); }
    bool all_certified() const;
    std::vector<std::size_t> order_census() const;
};

/// Closure of exact generators; throws SearchFailure when the size exceeds cap.
MobiusGroup group_closure(const std::vector<MobiusTransform>& gens, std::size_t cap);

/// Orders, canonical sort and classification of a finite element list that is
/// already closed. Table entries are computed with `same`.
MobiusGroup make_group(std::vector<GroupElement> elements, double tol = 1e-8);

enum class BeardonCase { SameFixedSet, InvolutionPair, None };

struct CommutingReport {
    bool commute = false;
    BeardonCase beardon = BeardonCase::None;
    bool both_involutions = false;
    bool disjoint_fixed_sets = false;
};

/// Throws InvalidArgument if either transform is the identity.
CommutingReport commuting_structure(const MobiusTransform& s, const MobiusTransform& t);

std::string to_string(BeardonCase c);

} // namespace deckmap
