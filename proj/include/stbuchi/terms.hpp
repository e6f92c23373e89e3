#pragma once

// Generator vocabulary shared by formulas and automata. Names are interned as
// indices into the owning automaton's Signature.

#include <compare>
#include <vector>

#include "stbuchi/relalg.hpp"

namespace stbuchi {

/// A concept name or its negation.
struct Literal {
    int concept_id = 0;
    bool negated = false;

    Literal complement() const { return {concept_id, !negated}; }
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Directions followed by a concrete feature: `d1 d2 g` names feature g at the
/// d1 d2 successor of the current node.
struct ChainTerm {
    std::vector<int> path;
    int feature = 0;

    /// Number of symbols, counting the feature.
    int length() const { return static_cast<int>(path.size()) + 1; }
    friend auto operator<=>(const ChainTerm&, const ChainTerm&) = default;
};

/// A binary RCC8 constraint between two chain terms.
struct SpatialConstraint {
    Relation rel;
    ChainTerm lhs;
    ChainTerm rhs;

    const ChainTerm& arg(int i) const { return i == 1 ? lhs : rhs; }
    friend auto operator<=>(const SpatialConstraint&, const SpatialConstraint&) = default;
};

/// Send a copy in state `state` to the `direction` successor.
struct Move {
    int direction = 0;
    int state = 0;
    friend auto operator<=>(const Move&, const Move&) = default;
};

/// Arity of the spatial relations; RCC8 is binary.
inline constexpr int kArity = 2;

}  // namespace stbuchi
