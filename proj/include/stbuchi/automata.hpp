#pragma once

// Alternating and nondeterministic Büchi automata on k-ary trees with RCC8
// constraints, plus finite run prefixes and their constraint networks.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stbuchi/formula.hpp"
#include "stbuchi/relalg.hpp"
#include "stbuchi/terms.hpp"

namespace stbuchi {

/// A node address: direction indices from the root.
using Word = std::vector<int>;

struct Signature {
    std::vector<std::string> directions;  // ordered d_1 < ... < d_k
    std::vector<std::string> concepts;
    std::vector<std::string> features;

    int k() const { return static_cast<int>(directions.size()); }
    std::optional<int> direction(const std::string& name) const;
    std::optional<int> concept_id(const std::string& name) const;
    std::optional<int> feature(const std::string& name) const;

    friend bool operator==(const Signature&, const Signature&) = default;
};

struct AlternatingAutomaton {
    Signature sig;
    std::vector<std::string> states;
    std::vector<Formula> delta;  // indexed by state
    int initial = 0;
    std::set<int> accepting;
};

struct Transition {
    std::set<Literal> literals;
    std::set<SpatialConstraint> constraints;
    std::vector<int> succ;  // one state per direction

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct NondetAutomaton {
    Signature sig;
    std::vector<std::string> states;
    std::vector<std::vector<Transition>> delta;  // indexed by state; may be empty
    int initial = 0;
    std::optional<int> accept_all;
    std::set<int> accepting;

    bool is_accepting(int q) const { return accepting.count(q) != 0; }
};

struct Defect {
    std::string location;
    std::string message;

    friend bool operator==(const Defect&, const Defect&) = default;
};

std::vector<Defect> validate(const AlternatingAutomaton& a);
std::vector<Defect> validate(const NondetAutomaton& a);

/// Size parameters of the finite-model node bounds.
struct Metrics {
    int constraints = 0;    // distinct constraints over all transitions
    int longest_chain = 1;  // longest chain term, counting the feature; at least 1
    int arity = kArity;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics metrics(const NondetAutomaton& a);

// ---------------------------------------------------------------------------
// Text helpers

std::string format_word(const Signature& sig, const Word& w);
/// Inverse of format_word; nullopt on unknown direction names.
std::optional<Word> parse_word(const Signature& sig, const std::string& text);
std::string format_literal(const Signature& sig, const Literal& l);
std::string format_chain(const Signature& sig, const ChainTerm& c);
std::string format_constraint(const Signature& sig, const SpatialConstraint& c);
std::string format_transition(const Signature& sig, const std::vector<std::string>& states, const Transition& t);
/// Network variable for feature `feature` at node `node`: `<d1.d2,g>`.
std::string variable_name(const Signature& sig, const Word& node, int feature);

// ---------------------------------------------------------------------------
// Run prefixes

template <class Label>
struct LabeledTree {
    Label label;
    std::vector<LabeledTree> children;  // empty at the horizon, k entries otherwise

    friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
};

struct RunLabel {
    int state = 0;
    std::set<Literal> literals;
    std::set<SpatialConstraint> constraints;

    friend bool operator==(const RunLabel&, const RunLabel&) = default;
};

using RunPrefix = LabeledTree<RunLabel>;

/// Qualitative fact about the input tree: `rel` holds between feature values
/// at two nodes.
struct SceneEdge {
    Word node_a;
    int feature_a = 0;
    Word node_b;
    int feature_b = 0;
    Relation rel = Relation::full();

    friend bool operator==(const SceneEdge&, const SceneEdge&) = default;
};

struct SceneLabel {
    std::set<int> concepts;
    std::vector<SceneEdge> edges;

    friend bool operator==(const SceneLabel&, const SceneLabel&) = default;
};

using SceneTreePrefix = LabeledTree<SceneLabel>;

template <class Label>
int depth(const LabeledTree<Label>& t) {
    int d = 0;
    for (const auto& c : t.children) d = std::max(d, depth(c) + 1);
    return d;
}

struct RunCheck {
    std::vector<Defect> defects;
    std::vector<std::string> unchecked_at_horizon;

    bool ok() const { return defects.empty(); }
};

/// Checks, at every node: (i) the label matches a transition of its state,
/// (ii) the literals agree with the concepts of the input label, (iii) every
/// constraint whose targets lie inside the prefix is compatible with the
/// scene, i.e. intersects the relation the scene declares for that pair.
RunCheck validate_run_prefix(const NondetAutomaton& a, const RunPrefix& r, const SceneTreePrefix& t);

/// Network of all constraints of the prefix, with variables `<node.path,g>`.
Qcsp csp_of_run_prefix(const Signature& sig, const RunPrefix& r);

/// Scene edges collected over the whole scene tree, as one network.
Qcsp scene_network(const Signature& sig, const SceneTreePrefix& t);

}  // namespace stbuchi
