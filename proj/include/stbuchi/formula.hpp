#pragma once

// Positive boolean formulas over generators and their set representation.

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "stbuchi/errors.hpp"
#include "stbuchi/terms.hpp"

namespace stbuchi {

using Generator = std::variant<Literal, SpatialConstraint, Move>;

/// And/Or tree over leaves of type `T`. No negation node exists; negation
/// only appears inside literal leaves.
template <class T>
struct FormulaTree {
    enum class Kind { Leaf, And, Or };

    Kind kind = Kind::Leaf;
    T leaf{};
    std::vector<FormulaTree> children;

    static FormulaTree atom(T g) { return FormulaTree{Kind::Leaf, std::move(g), {}}; }
    static FormulaTree conj(std::vector<FormulaTree> cs) { return FormulaTree{Kind::And, T{}, std::move(cs)}; }
    static FormulaTree disj(std::vector<FormulaTree> cs) { return FormulaTree{Kind::Or, T{}, std::move(cs)}; }

    friend bool operator==(const FormulaTree&, const FormulaTree&) = default;
};

using Formula = FormulaTree<Generator>;

/// One conjunct set of the set representation.
using Disjunct = std::set<Generator>;

inline constexpr std::size_t kDefaultDnfCap = 10'000;

/// Set representation of `f`: minimal generator sets (duplicates and strict
/// supersets removed), sorted. Throws ResourceLimit past `cap` disjuncts.
std::vector<Disjunct> dnf(const Formula& f, std::size_t cap = kDefaultDnfCap);

/// The three layers of a disjunct.
struct Partition {
    std::set<Literal> literals;
    std::set<SpatialConstraint> constraints;
    std::map<int, std::set<int>> moves;  // direction -> states, non-empty entries only

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Throws InadmissibleDisjunct if the literals hold some A and !A.
Partition partition(const Disjunct& d);

/// True when no literal occurs together with its complement.
bool literals_admissible(const std::set<Literal>& literals);

/// Monotone evaluation under an assignment of truth values to generators.
bool evaluate(const Formula& f, const std::function<bool(const Generator&)>& value);

/// Disjunction of conjunctions rebuilt from a set representation.
Formula from_dnf(const std::vector<Disjunct>& ds);

/// All distinct generators occurring in f.
std::set<Generator> generators(const Formula& f);

}  // namespace stbuchi
