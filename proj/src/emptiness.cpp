#include "stbuchi/emptiness.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "stbuchi/errors.hpp"

namespace stbuchi {

bool is_prefix(const Word& u, const Word& v) {
    return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

bool is_strict_prefix(const Word& u, const Word& v) { return u.size() < v.size() && is_prefix(u, v); }

bool lex_leq(const Word& u, const Word& v) {
    // prefix first, then the first differing direction decides
    return is_prefix(u, v) || std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
}

bool lex_less(const Word& u, const Word& v) { return u != v && lex_leq(u, v); }

bool incomparable(const Word& u, const Word& v) { return !is_prefix(u, v) && !is_prefix(v, u); }

std::optional<int> FiniteTreeModel::find(const Word& w) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), w,
                               [](const FtmNode& n, const Word& x) { return lex_less(n.word, x); });
    if (it == nodes.end() || it->word != w) return std::nullopt;
    return static_cast<int>(it - nodes.begin());
}

int FiniteTreeModel::internal_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const FtmNode& n) { return !n.is_leaf(); }));
}

int FiniteTreeModel::leaf_count() const { return static_cast<int>(nodes.size()) - internal_count(); }

int FiniteTreeModel::height() const {
    std::size_t h = 0;
    for (const auto& n : nodes) h = std::max(h, n.word.size());
    return static_cast<int>(h);
}

Ptpge backconstraints_step(const FtmNode& parent, int d) {
    Ptpge out;
    for (const auto& c : parent.constraints) {
        for (int i = 1; i <= kArity; ++i) {
            const ChainTerm& u = c.arg(i);
            if (!u.path.empty() && u.path.front() == d)
                out.insert({c, i, ChainTerm{std::vector<int>(u.path.begin() + 1, u.path.end()), u.feature}});
        }
    }
    for (const auto& t : parent.ptpge) {
        if (!t.rest.path.empty() && t.rest.path.front() == d)
            out.insert({t.constraint, t.arg, ChainTerm{std::vector<int>(t.rest.path.begin() + 1, t.rest.path.end()), t.rest.feature}});
    }
    return out;
}

long long internal_node_bound(int size_q, const Metrics& met) {
    return static_cast<long long>(size_q) * std::max(met.constraints, 1) * std::max(met.longest_chain, 1) * met.arity;
}

// ---------------------------------------------------------------------------

namespace {

/// Edges of the unfolding graph over internal nodes: x -> internal child,
/// x -> backnode of a leaf child. An infinite branch of the unfolded run is an
/// infinite path here.
template <class Nodes, class Fn>
void for_each_successor(const Nodes& nodes, int x, Fn&& fn) {
    for (int y : nodes[static_cast<std::size_t>(x)].children) {
        const auto& c = nodes[static_cast<std::size_t>(y)];
        fn(c.is_leaf() ? *c.backnode : y);
    }
}

class Search {
public:
    Search(const NondetAutomaton& a, const SearchOptions& options, SearchStats& stats)
        : a_(a), k_(a.sig.k()), stats_(stats) {
        limit_ = options.max_nodes ? *options.max_nodes
                                   : static_cast<int>(options.node_factor *
                                                      internal_node_bound(static_cast<int>(a.states.size()), metrics(a)));
        stats_.node_limit = limit_;
    }

    std::optional<FiniteTreeModel> run() {
        add_node(FtmNode{{}, a_.initial, {}, {}, {}, std::nullopt, {}}, -1);
        if (!open_internal(0)) return std::nullopt;
        while (true) {
            ++stats_.steps;
            if (stack_.empty()) {
                ++stats_.csp_checks;
                FiniteTreeModel m = model();
                if (is_consistent(globalcsp(a_.sig, m))) return m;
                if (!backtrack()) return std::nullopt;
                continue;
            }
            auto& top = stack_.back();
            if (top.second == k_) {
                stack_.pop_back();
                continue;
            }
            const int s = top.first;
            const int d = top.second++;
            const FtmNode& parent = nodes_[static_cast<std::size_t>(s)];
            FtmNode c;
            c.word = parent.word;
            c.word.push_back(d);
            c.state = a_.delta[static_cast<std::size_t>(parent.state)][static_cast<std::size_t>(transition_[static_cast<std::size_t>(s)])]
                          .succ[static_cast<std::size_t>(d)];
            c.ptpge = backconstraints_step(parent, d);
            const int id = add_node(std::move(c), s);
            auto match = signatures_.find({nodes_.back().state, nodes_.back().ptpge});
            if (match != signatures_.end()) {
                nodes_.back().backnode = match->second;
                if (!closes_accepting(id, s, match->second) && !backtrack()) return std::nullopt;
            } else if (!open_internal(id)) {
                return std::nullopt;
            }
        }
    }

private:
    struct ChoicePoint {
        int node;
        int transition;
        std::vector<std::pair<int, int>> stack;
    };

    bool accepting(int id) const { return a_.is_accepting(nodes_[static_cast<std::size_t>(id)].state); }

    int add_node(FtmNode n, int parent) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(std::move(n));
        parent_.push_back(parent);
        transition_.push_back(-1);
        if (parent >= 0) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
        return id;
    }

    bool open_internal(int id) {
        const FtmNode& n = nodes_[static_cast<std::size_t>(id)];
        signatures_.emplace(std::make_pair(n.state, n.ptpge), id);
        if (static_cast<int>(signatures_.size()) > limit_)
            throw ResourceLimit("search exceeds " + std::to_string(limit_) + " internal nodes");
        choices_.push_back({id, -1, stack_});
        if (advance(choices_.back())) return true;
        choices_.pop_back();
        return backtrack();
    }

    // Drops every node with id >= size.
    void truncate(std::size_t size) {
        for (std::size_t i = size; i < nodes_.size(); ++i) {
            auto it = signatures_.find({nodes_[i].state, nodes_[i].ptpge});
            if (it != signatures_.end() && it->second == static_cast<int>(i)) signatures_.erase(it);
        }
        nodes_.resize(size);
        parent_.resize(size);
        transition_.resize(size);
        for (auto& n : nodes_)
            while (!n.children.empty() && n.children.back() >= static_cast<int>(size)) n.children.pop_back();
    }

    bool advance(ChoicePoint& cp) {
        const auto& ts = a_.delta[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(cp.node)].state)];
        const int t = cp.transition + 1;
        if (t >= static_cast<int>(ts.size())) return false;
        cp.transition = t;
        truncate(static_cast<std::size_t>(cp.node) + 1);
        FtmNode& n = nodes_[static_cast<std::size_t>(cp.node)];
        n.literals = ts[static_cast<std::size_t>(t)].literals;
        n.constraints = ts[static_cast<std::size_t>(t)].constraints;
        transition_[static_cast<std::size_t>(cp.node)] = t;
        stack_ = cp.stack;
        stack_.push_back({cp.node, 0});
        return true;
    }

    bool backtrack() {
        ++stats_.backtracks;
        while (!choices_.empty()) {
            if (advance(choices_.back())) return true;
            choices_.pop_back();
        }
        return false;
    }

    // Leaf `leaf` under `parent` now points to `back`. Rejected when that
    // closes a cycle of the unfolding graph free of accepting states.
    bool closes_accepting(int leaf, int parent, int back) const {
        const Word& lw = nodes_[static_cast<std::size_t>(leaf)].word;
        const Word& bw = nodes_[static_cast<std::size_t>(back)].word;
        if (is_strict_prefix(bw, lw)) {
            bool seen = false;
            for (int w = parent; w >= 0 && !seen; w = parent_[static_cast<std::size_t>(w)]) {
                seen = accepting(w);
                if (w == back) break;
            }
            if (!seen) return false;
        }
        if (accepting(back) || accepting(parent)) return true;
        std::vector<char> visited(nodes_.size(), 0);
        std::deque<int> queue{back};
        visited[static_cast<std::size_t>(back)] = 1;
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            if (x == parent) return false;
            for_each_successor(nodes_, x, [&](int y) {
                if (!visited[static_cast<std::size_t>(y)] && !accepting(y)) {
                    visited[static_cast<std::size_t>(y)] = 1;
                    queue.push_back(y);
                }
            });
        }
        return true;
    }

    FiniteTreeModel model() const { return FiniteTreeModel{k_, nodes_}; }

    const NondetAutomaton& a_;
    int k_;
    SearchStats& stats_;
    int limit_ = 0;
    std::vector<FtmNode> nodes_;
    std::vector<int> parent_;
    std::vector<int> transition_;
    std::map<std::pair<int, Ptpge>, int> signatures_;
    std::vector<std::pair<int, int>> stack_;  // (node, next direction)
    std::vector<ChoicePoint> choices_;
};

}  // namespace

std::optional<FiniteTreeModel> ftm_search(const NondetAutomaton& a, const SearchOptions& options, SearchStats* stats) {
    SearchStats local;
    Search search(a, options, stats ? *stats : local);
    return search.run();
}

// ---------------------------------------------------------------------------

int resolve_node(const FiniteTreeModel& m, int s, const ChainTerm& u) {
    auto valid = [&](int id) { return id >= 0 && static_cast<std::size_t>(id) < m.nodes.size(); };
    if (!valid(s)) throw MalformedModel("node id out of range");
    int cur = s;
    std::size_t pos = 0;
    while (true) {
        const FtmNode& n = m.node(cur);
        if (n.is_leaf()) {
            if (!n.backnode || !valid(*n.backnode) || m.node(*n.backnode).is_leaf())
                throw MalformedModel("leaf without internal backnode");
            cur = *n.backnode;
            continue;
        }
        if (pos == u.path.size()) return cur;
        const int d = u.path[pos++];
        if (d < 0 || static_cast<std::size_t>(d) >= n.children.size() || !valid(n.children[static_cast<std::size_t>(d)]))
            throw MalformedModel("chain leaves the model below node " + std::to_string(cur));
        cur = n.children[static_cast<std::size_t>(d)];
    }
}

std::string resolve_variable(const Signature& sig, const FiniteTreeModel& m, int s, const ChainTerm& u) {
    return variable_name(sig, m.node(resolve_node(m, s, u)).word, u.feature);
}

Qcsp globalcsp(const Signature& sig, const FiniteTreeModel& m) {
    Qcsp net;
    for (std::size_t s = 0; s < m.nodes.size(); ++s) {
        const FtmNode& n = m.nodes[s];
        if (n.is_leaf()) continue;
        for (const auto& c : n.constraints) {
            const std::string a = resolve_variable(sig, m, static_cast<int>(s), c.lhs);
            const std::string b = resolve_variable(sig, m, static_cast<int>(s), c.rhs);
            net.constrain(a, b, c.rel);
        }
    }
    return net;
}

int clamp_unfold_depth(int k, int depth, std::size_t max_nodes) {
    std::size_t total = 1, level = 1;
    for (int d = 1; d <= depth; ++d) {
        level *= static_cast<std::size_t>(k);
        total += level;
        if (total > max_nodes) return d - 1;
    }
    return depth;
}

RunPrefix unfold(const FiniteTreeModel& m, int depth) {
    std::function<RunPrefix(int, int)> build = [&](int id, int left) {
        const FtmNode& src = m.node(id);
        const int origin = src.is_leaf() ? *src.backnode : id;
        const FtmNode& o = m.node(origin);
        RunPrefix r{RunLabel{o.state, o.literals, o.constraints}, {}};
        if (left > 0)
            for (int c : o.children) r.children.push_back(build(c, left - 1));
        return r;
    };
    return build(0, depth);
}

std::optional<SceneTreePrefix> compatible_scene(const NondetAutomaton& a, const FiniteTreeModel& m, int depth) {
    const auto solved = solve(globalcsp(a.sig, m));
    if (!solved) return std::nullopt;
    std::function<SceneTreePrefix(int, Word&)> build = [&](int id, Word& at) {
        const FtmNode& src = m.node(id);
        const int origin = src.is_leaf() ? *src.backnode : id;
        const FtmNode& o = m.node(origin);
        SceneTreePrefix t;
        for (const auto& l : o.literals)
            if (!l.negated) t.label.concepts.insert(l.concept_id);
        for (const auto& c : o.constraints) {
            if (static_cast<int>(at.size() + std::max(c.lhs.path.size(), c.rhs.path.size())) > depth) continue;
            const std::string va = resolve_variable(a.sig, m, origin, c.lhs);
            const std::string vb = resolve_variable(a.sig, m, origin, c.rhs);
            Relation rel = Atom::EQ;
            if (va != vb) rel = solved->at(*solved->find(va), *solved->find(vb));
            Word wa = at, wb = at;
            wa.insert(wa.end(), c.lhs.path.begin(), c.lhs.path.end());
            wb.insert(wb.end(), c.rhs.path.begin(), c.rhs.path.end());
            t.label.edges.push_back({wa, c.lhs.feature, wb, c.rhs.feature, rel});
        }
        if (static_cast<int>(at.size()) < depth) {
            for (std::size_t d = 0; d < o.children.size(); ++d) {
                at.push_back(static_cast<int>(d));
                t.children.push_back(build(o.children[d], at));
                at.pop_back();
            }
        }
        return t;
    };
    Word root;
    return build(0, root);
}

BoundsReport check_bounds(const FiniteTreeModel& m, const Metrics& met, int size_q) {
    BoundsReport r;
    r.internal = m.internal_count();
    r.leaves = m.leaf_count();
    r.internal_bound = internal_node_bound(size_q, met);
    r.leaf_bound = r.internal_bound * m.k;
    r.clamped = met.constraints < 1 || met.longest_chain < 1;
    std::map<std::pair<int, Ptpge>, const Word*> seen;
    for (const auto& n : m.nodes) {
        if (n.is_leaf()) continue;
        auto [it, fresh] = seen.emplace(std::make_pair(n.state, n.ptpge), &n.word);
        if (!fresh) r.duplicate_signatures.emplace_back(*it->second, n.word);
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

void check_structure(const NondetAutomaton& a, const FiniteTreeModel& m, std::vector<std::string>& fail) {
    const auto& sig = a.sig;
    const int n = static_cast<int>(m.nodes.size());
    auto valid = [&](int id) { return id >= 0 && id < n; };
    auto where = [&](int id) { return "node " + format_word(sig, m.node(id).word) + ": "; };
    if (m.k != sig.k()) fail.push_back("model arity " + std::to_string(m.k) + " differs from the automaton's");
    if (m.root().word != Word{} || m.root().state != a.initial || !m.root().ptpge.empty())
        fail.push_back("root must be ε in the initial state with no pending triples");
    std::vector<int> parents(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const FtmNode& v = m.node(i);
        if (i > 0 && !lex_less(m.node(i - 1).word, v.word)) fail.push_back(where(i) + "nodes are not in lexicographic order");
        if (v.state < 0 || static_cast<std::size_t>(v.state) >= a.states.size()) {
            fail.push_back(where(i) + "unknown state");
            continue;
        }
        if (v.is_leaf()) {
            if (!v.backnode || !valid(*v.backnode)) {
                fail.push_back(where(i) + "leaf without backnode");
                continue;
            }
            const FtmNode& u = m.node(*v.backnode);
            if (u.is_leaf()) fail.push_back(where(i) + "backnode is a leaf");
            if (!lex_less(u.word, v.word)) fail.push_back(where(i) + "backnode is not lexicographically smaller");
            if (u.state != v.state) fail.push_back(where(i) + "state differs from its backnode");
            if (u.ptpge != v.ptpge) fail.push_back(where(i) + "pending triples differ from its backnode");
            if (!v.literals.empty() || !v.constraints.empty()) fail.push_back(where(i) + "leaf carries a label");
            continue;
        }
        if (v.backnode) fail.push_back(where(i) + "internal node with a backnode");
        if (v.children.size() != static_cast<std::size_t>(m.k)) {
            fail.push_back(where(i) + "internal node needs " + std::to_string(m.k) + " children");
            continue;
        }
        std::vector<int> succ;
        bool children_ok = true;
        for (int d = 0; d < m.k; ++d) {
            const int c = v.children[static_cast<std::size_t>(d)];
            Word expect = v.word;
            expect.push_back(d);
            if (!valid(c) || m.node(c).word != expect) {
                fail.push_back(where(i) + "child " + std::to_string(d + 1) + " has the wrong address");
                children_ok = false;
                continue;
            }
            ++parents[static_cast<std::size_t>(c)];
            succ.push_back(m.node(c).state);
            if (backconstraints_step(v, d) != m.node(c).ptpge)
                fail.push_back("node " + format_word(sig, expect) + ": pending triples do not match recomputation");
        }
        if (!children_ok) continue;
        const auto& ts = a.delta[static_cast<std::size_t>(v.state)];
        const bool found = std::any_of(ts.begin(), ts.end(), [&](const Transition& t) {
            return t.literals == v.literals && t.constraints == v.constraints && t.succ == succ;
        });
        if (!found) fail.push_back(where(i) + "label is not a transition of " + a.states[static_cast<std::size_t>(v.state)]);
    }
    for (int i = 1; i < n; ++i)
        if (parents[static_cast<std::size_t>(i)] != 1)
            fail.push_back(where(i) + "reached from " + std::to_string(parents[static_cast<std::size_t>(i)]) + " parents");
}

void check_acceptance(const NondetAutomaton& a, const FiniteTreeModel& m, std::vector<std::string>& fail) {
    const auto& sig = a.sig;
    auto acc = [&](int id) { return a.is_accepting(m.node(id).state); };
    // no leaf jumps back to an ancestor without an accepting node in between
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const FtmNode& v = m.nodes[i];
        if (!v.is_leaf() || !is_strict_prefix(m.node(*v.backnode).word, v.word)) continue;
        bool seen = acc(static_cast<int>(i));
        for (std::size_t len = m.node(*v.backnode).word.size(); len < v.word.size() && !seen; ++len)
            seen = acc(*m.find(Word(v.word.begin(), v.word.begin() + static_cast<std::ptrdiff_t>(len))));
        if (!seen)
            fail.push_back("node " + format_word(sig, v.word) + ": loops back to " + format_word(sig, m.node(*v.backnode).word) +
                           " with no accepting state in between");
    }
    // every cycle of the unfolding graph meets an accepting state
    const std::size_t n = m.nodes.size();
    std::vector<int> color(n, 0);
    std::function<bool(int)> dfs = [&](int x) {
        color[static_cast<std::size_t>(x)] = 1;
        bool cyc = false;
        for_each_successor(m.nodes, x, [&](int y) {
            if (cyc || acc(y)) return;
            if (color[static_cast<std::size_t>(y)] == 1) cyc = true;
            else if (color[static_cast<std::size_t>(y)] == 0) cyc = dfs(y);
        });
        color[static_cast<std::size_t>(x)] = 2;
        return cyc;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (m.nodes[i].is_leaf() || acc(static_cast<int>(i)) || color[i] != 0) continue;
        if (dfs(static_cast<int>(i))) {
            fail.push_back("cycle without accepting state through " + format_word(sig, m.nodes[i].word));
            break;
        }
    }
}

}  // namespace

WitnessReport check_witness(const NondetAutomaton& a, const FiniteTreeModel& m, const WitnessCheckOptions& options) {
    WitnessReport r;
    if (m.nodes.empty()) {
        r.failures.push_back("model has no nodes");
        return r;
    }
    check_structure(a, m, r.failures);
    if (!r.ok()) return r;
    check_acceptance(a, m, r.failures);

    r.bounds = check_bounds(m, metrics(a), static_cast<int>(a.states.size()));
    if (r.bounds.clamped) r.notes.push_back("bound factors clamped to 1");
    if (r.bounds.internal > r.bounds.internal_bound)
        r.failures.push_back("internal nodes " + std::to_string(r.bounds.internal) + " exceed " +
                             std::to_string(r.bounds.internal_bound));
    if (r.bounds.leaves > r.bounds.leaf_bound)
        r.failures.push_back("leaves " + std::to_string(r.bounds.leaves) + " exceed " + std::to_string(r.bounds.leaf_bound));
    for (const auto& [u, v] : r.bounds.duplicate_signatures)
        r.failures.push_back("internal nodes " + format_word(a.sig, u) + " and " + format_word(a.sig, v) +
                             " share state and pending triples");

    try {
        if (!is_consistent(globalcsp(a.sig, m))) r.failures.push_back("global network is inconsistent");
    } catch (const MalformedModel& e) {
        r.failures.push_back(std::string("global network: ") + e.what());
    }
    if (!r.ok() || !options.check_unfold) return r;

    std::vector<int> depths = options.unfold_depths;
    if (depths.empty()) depths = {1, 2, 3 * m.height()};
    for (int d : depths) {
        const int clamped = clamp_unfold_depth(m.k, d);
        if (clamped != d) r.notes.push_back("unfold depth " + std::to_string(d) + " clamped to " + std::to_string(clamped));
        r.unfold_depths.push_back(clamped);
        const auto scene = compatible_scene(a, m, clamped);
        if (!scene) {
            r.failures.push_back("no scene at depth " + std::to_string(clamped));
            continue;
        }
        const RunCheck rc = validate_run_prefix(a, unfold(m, clamped), *scene);
        for (const auto& def : rc.defects)
            r.failures.push_back("unfold depth " + std::to_string(clamped) + ", node " + def.location + ": " + def.message);
    }
    return r;
}

Decision decide(const NondetAutomaton& a, const DecideOptions& options) {
    Decision out;
    out.witness = ftm_search(a, options.search, &out.stats);
    out.empty = !out.witness;
    if (out.empty) return out;
    WitnessCheckOptions wc;
    wc.unfold_depths = {options.unfold_depth.value_or(3 * out.witness->height())};
    out.report = check_witness(a, *out.witness, wc);
    for (const auto& n : out.report->notes) out.diagnostics.push_back(n);
    for (const auto& f : out.report->failures) out.diagnostics.push_back("witness check: " + f);
    return out;
}

}  // namespace stbuchi
