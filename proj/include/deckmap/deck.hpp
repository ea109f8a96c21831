#pragma once

// Deck groups Deck(f^k) = {tau : f^k o tau = f^k} and automorphism groups
// Aut(f) = {tau : f o tau = tau o f}.

#include "deckmap/mobius.hpp"
#include "deckmap/ratmap.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace deckmap {

struct DeckOptions {
    int precision_bits = 53;
    std::size_t degree_cap = kDefaultDegreeCap;
    std::size_t max_base_tries = 64;
    /// 0 = DECKMAP_THREADS or the hardware count.
    std::size_t workers = 0;
    /// Re-run at the other precision when some element is numeric only.
    bool cross_check = true;
};

struct SpecialPair {
    std::array<PointValue, 2> points;
    /// Index of the involution in DeckResult::group.elements.
    std::size_t involution = 0;
};

struct DeckResult {
    MobiusGroup group;
    std::vector<SpherePoint> base_points;
    /// Fixed-point pairs of the three involutions when the group is V4.
    std::optional<std::array<SpecialPair, 3>> special_pairs;
    /// All elements certified, or the numeric group had the same type at 53 and 113 bits.
    bool iso_type_confirmed = false;
    /// Numeric elements disagreed between precisions; iso describes the certified subgroup.
    bool restricted_to_certified = false;
    std::size_t k = 1;
    std::size_t map_degree = 0;
    int precision_bits = 53;
};

/// Deck(f^k).
DeckResult deck_group(const RationalMap& f, std::size_t k, const DeckOptions& opts = {});

/// Deck(F) for an already iterated map.
DeckResult deck_group_of(const RationalMap& F, const DeckOptions& opts = {});

/// Base-point sequence 2, 3, 1+i, 2+i, 5/2, then (7+j)/3 + (2j+1)/5 i.
SpherePoint deck_base_point(std::size_t index);

/// Regular value test: the fiber of F over w has deg F distinct finite points.
bool is_regular_value(const RationalMap& F, const SpherePoint& w);

enum class PairLabel { CriticalPoints, PreimageOfC1, PreimageOfC2 };
std::string to_string(PairLabel label);

struct LabeledPair {
    SpecialPair pair;
    PairLabel label = PairLabel::CriticalPoints;
};

/// Labels the special pairs of a V4 deck group against C_f, f^{-1}(c1), f^{-1}(c2).
/// Throws InvalidArgument when the group is not V4.
std::array<LabeledPair, 3> special_pairs(const DeckResult& dr, const RationalMap& f);

/// Aut(f); only exactly certified elements are members.
MobiusGroup aut_group(const RationalMap& f, const DeckOptions& opts = {});

} // namespace deckmap
