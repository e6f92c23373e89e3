#pragma once

// Random automata for property tests.

#include <random>

#include "stbuchi/automata.hpp"

namespace gen {

using namespace stbuchi;

inline int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Signature signature(int k) {
    Signature s;
    for (int d = 1; d <= k; ++d) s.directions.push_back("d" + std::to_string(d));
    s.concepts = {"A", "B"};
    s.features = {"g", "h"};
    return s;
}

inline std::vector<std::string> state_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("q" + std::to_string(i));
    return out;
}

inline std::set<int> random_subset(std::mt19937& rng, int n) {
    std::set<int> out;
    for (int i = 0; i < n; ++i)
        if (pick(rng, 0, 1)) out.insert(i);
    return out;
}

inline Literal random_literal(std::mt19937& rng) { return Literal{pick(rng, 0, 1), pick(rng, 0, 3) == 0}; }

inline SpatialConstraint random_constraint(std::mt19937& rng, int k, int max_path) {
    auto chain = [&] {
        ChainTerm c;
        const int len = pick(rng, 0, max_path);
        for (int i = 0; i < len; ++i) c.path.push_back(pick(rng, 0, k - 1));
        c.feature = pick(rng, 0, 1);
        return c;
    };
    Relation rel(static_cast<std::uint8_t>(pick(rng, 1, 255)));
    return SpatialConstraint{rel, chain(), chain()};
}

/// Arbitrary positive formula over moves and literals.
inline Formula random_formula(std::mt19937& rng, int states, int k, int depth) {
    if (depth == 0 || pick(rng, 0, 3) == 0) {
        if (pick(rng, 0, 4) == 0) return Formula::atom(random_literal(rng));
        return Formula::atom(Move{pick(rng, 0, k - 1), pick(rng, 0, states - 1)});
    }
    std::vector<Formula> cs;
    const int width = pick(rng, 1, 3);
    for (int i = 0; i < width; ++i) cs.push_back(random_formula(rng, states, k, depth - 1));
    return pick(rng, 0, 1) ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
}

inline AlternatingAutomaton random_alternating(std::mt19937& rng, int max_q = 4, int max_k = 2) {
    AlternatingAutomaton a;
    const int n = pick(rng, 1, max_q);
    const int k = pick(rng, 1, max_k);
    a.sig = signature(k);
    a.states = state_names(n);
    for (int q = 0; q < n; ++q) a.delta.push_back(random_formula(rng, n, k, 3));
    a.initial = 0;
    a.accepting = random_subset(rng, n);
    return a;
}

/// Each delta(q) is a disjunction of conjunctions with exactly one move per
/// direction, plus optional literals and constraints.
inline AlternatingAutomaton random_nondet_shaped(std::mt19937& rng, bool with_constraints, int max_q = 4, int max_k = 2) {
    AlternatingAutomaton a;
    const int n = pick(rng, 1, max_q);
    const int k = pick(rng, 1, max_k);
    a.sig = signature(k);
    a.states = state_names(n);
    for (int q = 0; q < n; ++q) {
        std::vector<Formula> ors;
        const int r = pick(rng, 1, 3);
        for (int i = 0; i < r; ++i) {
            std::vector<Formula> ands;
            for (int d = 0; d < k; ++d) ands.push_back(Formula::atom(Move{d, pick(rng, 0, n - 1)}));
            if (pick(rng, 0, 2) == 0) ands.push_back(Formula::atom(random_literal(rng)));
            if (with_constraints && pick(rng, 0, 2) == 0) ands.push_back(Formula::atom(random_constraint(rng, k, 1)));
            std::shuffle(ands.begin(), ands.end(), rng);
            ors.push_back(Formula::conj(std::move(ands)));
        }
        a.delta.push_back(Formula::disj(std::move(ors)));
    }
    a.accepting = random_subset(rng, n);
    return a;
}

inline NondetAutomaton random_nondet(std::mt19937& rng, int max_q = 4, int max_k = 2, bool with_constraints = false) {
    NondetAutomaton a;
    const int n = pick(rng, 1, max_q);
    const int k = pick(rng, 1, max_k);
    a.sig = signature(k);
    a.states = state_names(n);
    for (int q = 0; q < n; ++q) {
        std::set<Transition> ts;
        const int r = pick(rng, 0, 3);
        for (int i = 0; i < r; ++i) {
            Transition t;
            if (pick(rng, 0, 2) == 0) t.literals.insert(random_literal(rng));
            if (with_constraints && pick(rng, 0, 2) == 0) t.constraints.insert(random_constraint(rng, k, 1));
            for (int d = 0; d < k; ++d) t.succ.push_back(pick(rng, 0, n - 1));
            ts.insert(t);
        }
        a.delta.emplace_back(ts.begin(), ts.end());
    }
    a.accepting = random_subset(rng, n);
    return a;
}

}  // namespace gen
