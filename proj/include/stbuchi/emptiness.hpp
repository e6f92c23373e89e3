#pragma once

// Emptiness of nondeterministic automata by backtracking construction of a
// finite tree model: a finite tree whose leaves point back to internal nodes
// with the same state and the same pending constraints, and which unfolds
// into an accepting regular run.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stbuchi/automata.hpp"

namespace stbuchi {

// --- Word order (d_1 < ... < d_k) ------------------------------------------

bool is_prefix(const Word& u, const Word& v);
bool is_strict_prefix(const Word& u, const Word& v);
bool lex_leq(const Word& u, const Word& v);
bool lex_less(const Word& u, const Word& v);
bool incomparable(const Word& u, const Word& v);

// --- Pending constraints ----------------------------------------------------

/// A constraint issued by an ancestor whose `arg`-th chain still has `rest` to
/// go below the current node. `rest` with an empty path targets the node itself.
struct PtpTriple {
    SpatialConstraint constraint;
    int arg = 1;
    ChainTerm rest;

    friend auto operator<=>(const PtpTriple&, const PtpTriple&) = default;
};

using Ptpge = std::set<PtpTriple>;

struct FtmNode {
    Word word;
    int state = 0;
    std::set<Literal> literals;              // empty on leaves
    std::set<SpatialConstraint> constraints;  // empty on leaves
    std::vector<int> children;               // node ids, k entries on internal nodes
    std::optional<int> backnode;             // leaves only
    Ptpge ptpge;

    bool is_leaf() const { return children.empty(); }
};

/// Nodes are stored in lexicographic (preorder) order; node 0 is the root.
struct FiniteTreeModel {
    int k = 0;
    std::vector<FtmNode> nodes;

    const FtmNode& root() const { return nodes.front(); }
    const FtmNode& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
    std::optional<int> find(const Word& w) const;
    int internal_count() const;
    int leaf_count() const;
    int height() const;
};

/// Pending triples handed from `parent` to its child in direction d.
Ptpge backconstraints_step(const FtmNode& parent, int d);

// --- Search -----------------------------------------------------------------

inline constexpr int kDefaultNodeFactor = 2;

struct SearchOptions {
    int node_factor = kDefaultNodeFactor;
    /// Overrides node_factor * bound as the internal node limit.
    std::optional<int> max_nodes;
};

struct SearchStats {
    std::size_t steps = 0;
    std::size_t backtracks = 0;
    std::size_t csp_checks = 0;
    int node_limit = 0;
};

/// Returns the first finite tree model found by depth-first backtracking
/// (transitions in declared order, directions in order), or nullopt when none
/// exists. Throws ResourceLimit when the live tree outgrows the node limit.
std::optional<FiniteTreeModel> ftm_search(const NondetAutomaton& a, const SearchOptions& options = {},
                                          SearchStats* stats = nullptr);

/// Network over `<word,g>` variables of internal nodes.
Qcsp globalcsp(const Signature& sig, const FiniteTreeModel& m);

/// Node id of the internal node holding the variable for chain `u` read at
/// node `s`. Throws MalformedModel when the chain leaves the model.
int resolve_node(const FiniteTreeModel& m, int s, const ChainTerm& u);
std::string resolve_variable(const Signature& sig, const FiniteTreeModel& m, int s, const ChainTerm& u);

/// Largest depth whose full k-ary prefix stays within `max_nodes` nodes.
int clamp_unfold_depth(int k, int depth, std::size_t max_nodes = std::size_t{1} << 16);

/// Depth-D truncation of the regular run: leaves replaced by copies of their
/// backnode's subtree.
RunPrefix unfold(const FiniteTreeModel& m, int depth);

/// Scene for a prefix of unfold(m, depth) taken from an atomic solution of
/// globalcsp(m); nullopt when that network is inconsistent.
std::optional<SceneTreePrefix> compatible_scene(const NondetAutomaton& a, const FiniteTreeModel& m, int depth);

struct BoundsReport {
    int internal = 0;
    int leaves = 0;
    long long internal_bound = 0;
    long long leaf_bound = 0;
    bool clamped = false;
    std::vector<std::pair<Word, Word>> duplicate_signatures;

    bool ok() const {
        return internal <= internal_bound && leaves <= leaf_bound && duplicate_signatures.empty();
    }
};

/// |Q| * max(n_c,1) * max(l_fc,1) * p
long long internal_node_bound(int size_q, const Metrics& met);
BoundsReport check_bounds(const FiniteTreeModel& m, const Metrics& met, int size_q);

struct WitnessReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    BoundsReport bounds;
    std::vector<int> unfold_depths;

    bool ok() const { return failures.empty(); }
};

struct WitnessCheckOptions {
    /// Unfold depths to validate; empty means {1, 2, 3 * height}.
    std::vector<int> unfold_depths;
    bool check_unfold = true;
};

/// Independent re-validation of a model against the automaton: structure,
/// leaf contract, recomputed pending triples, transitions, acceptance on all
/// cycles, node bounds, global network, unfolded prefixes.
WitnessReport check_witness(const NondetAutomaton& a, const FiniteTreeModel& m, const WitnessCheckOptions& options = {});

struct Decision {
    bool empty = true;
    std::optional<FiniteTreeModel> witness;
    std::optional<WitnessReport> report;
    SearchStats stats;
    std::vector<std::string> diagnostics;
};

struct DecideOptions {
    SearchOptions search;
    /// Depth for the unfolding post-check; default 3 * height.
    std::optional<int> unfold_depth;
};

Decision decide(const NondetAutomaton& a, const DecideOptions& options = {});

}  // namespace stbuchi
