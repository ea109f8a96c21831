#pragma once

// Recovering critical points and values of f from an iterate F = f^k, and
// analysis of pairs of maps that may share an iterate.

#include "deckmap/deck.hpp"
#include "deckmap/mobius.hpp"
#include "deckmap/ratmap.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

enum class DetectionCase {
    HigherDegree,
    QuadraticCyclic,
    QuadraticPower,
    V4NoFixedPoint,
    V4FixedPointM2CrossRatio,
    V4FixedPointMGt2Counts,
    D8PowerLike,
};

/// "higher-degree", "quadratic-cyclic", ...
std::string to_string(DetectionCase c);

struct CrossRatio {
    PointValue value;
    bool exact = false;
    bool equals_minus_one = false;
    /// x^2 - 6x + 1 = 0, i.e. x = 3 +- 2 sqrt 2.
    bool root_of_x2_6x_1 = false;

    bool in_lattes_set() const { return equals_minus_one || root_of_x2_6x_1; }
};

/// Image of b under the Mobius map sending (v1, v2, a) to (0, inf, 1).
/// Throws InvalidArgument when two anchors coincide.
CrossRatio cross_ratio(const PointValue& v1, const PointValue& v2, const PointValue& a, const PointValue& b,
                       double tol = 1e-8);

struct FiberCount {
    PointValue point;
    std::size_t critical_points = 0;
};

struct DetectionEvidence {
    IsoType deck_iso;
    bool deck_confirmed = false;
    /// Index into the deck group of the element whose fixed points gave C.
    std::optional<std::size_t> deck_element;
    /// Critical values x of F whose whole F-fiber is critical.
    std::vector<PointValue> all_critical_fibers;
    /// F-images of the three special pairs (V4 only).
    std::vector<PointValue> special_pair_images;
    std::optional<PointValue> alpha;
    std::optional<PointValue> beta;
    std::optional<std::size_t> m;
    std::optional<CrossRatio> cross_ratio;
    /// Critical points of F per postcritical point (fixed-point cases).
    std::vector<FiberCount> fiber_counts;
};

struct DetectionReport {
    std::array<PointValue, 2> critical_points;
    std::array<PointValue, 2> critical_values;
    DetectionCase case_label = DetectionCase::HigherDegree;
    DetectionEvidence evidence;
};

/// F = f^k with f bicritical of degree d >= 3.
DetectionReport detect_higher_degree(const RationalMap& F, std::size_t d, std::size_t k,
                                     const DeckOptions& opts = {});

/// F = f^k with f quadratic, k >= 2.
DetectionReport detect_quadratic(const RationalMap& F, std::size_t k, const DeckOptions& opts = {});

/// Number of distinct critical points of F in the fiber of F over x.
std::size_t count_critical_in_fiber(const RationalMap& F, const PointValue& x);
std::size_t count_critical_in_fiber(const RationalMap& F, const CriticalData& crit, const PointValue& x);

/// Critical values x of F whose F-fiber consists of critical points only.
std::vector<PointValue> all_critical_fibers(const RationalMap& F, const CriticalData& crit);

/// Postcritical set of F, or nullopt if it has more than max_points points.
std::optional<std::vector<PointValue>> postcritical_set(const RationalMap& F, const CriticalData& crit,
                                                        std::size_t max_points = kDefaultOrbitBound);

/// The unique mu with g = mu o f, for bicritical f, g with C_f = C_g.
MobiusTransform mobius_factor(const RationalMap& f, const RationalMap& g);

struct SharedIterateReport {
    std::optional<std::size_t> minimal_k;
    std::size_t max_k = 0;
    bool cv_cp_agree = false;
    /// A shared iterate was found although C or V differ.
    bool agreement_violation = false;
    bool second_iterate_equal = false;
    std::optional<MobiusTransform> involution_mu;
    bool mu_is_involution = false;
    bool mu_commutes_with_f = false;
    bool mu_transposes_critical_points = false;
    bool mu_transposes_critical_values = false;
    bool symmetry_locus_member = false;
    std::vector<PointValue> critical_points_f, critical_points_g;
    std::vector<PointValue> critical_values_f, critical_values_g;
};

SharedIterateReport shared_iterate_analysis(const RationalMap& f, const RationalMap& g, std::size_t max_k,
                                            std::size_t degree_cap = kDefaultDegreeCap);

} // namespace deckmap
