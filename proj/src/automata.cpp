#include "stbuchi/automata.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace stbuchi {

namespace {

std::optional<int> index_of(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<int>(it - names.begin());
}

bool in_range(int i, std::size_t n) { return i >= 0 && static_cast<std::size_t>(i) < n; }

class DefectSink {
public:
    void add(std::string location, std::string message) {
        defects_.push_back({std::move(location), std::move(message)});
    }
    std::vector<Defect> take() { return std::move(defects_); }

private:
    std::vector<Defect> defects_;
};

void check_names(const std::string& what, const std::vector<std::string>& names, DefectSink& sink) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) sink.add(what, "empty name");
        if (!seen.insert(n).second) sink.add(what, "duplicate name '" + n + "'");
    }
}

void check_signature(const Signature& sig, DefectSink& sink) {
    if (sig.k() < 1) sink.add("directions", "at least one direction is required");
    check_names("directions", sig.directions, sink);
    check_names("concepts", sig.concepts, sink);
    check_names("features", sig.features, sink);
    auto overlap = [&](const std::vector<std::string>& a, const std::vector<std::string>& b, const char* what) {
        for (const auto& n : a)
            if (std::find(b.begin(), b.end(), n) != b.end())
                sink.add("signature", std::string("name '") + n + "' used as both " + what);
    };
    overlap(sig.directions, sig.concepts, "direction and concept");
    overlap(sig.directions, sig.features, "direction and feature");
    overlap(sig.concepts, sig.features, "concept and feature");
}

void check_literal(const Signature& sig, const Literal& l, const std::string& where, DefectSink& sink) {
    if (!in_range(l.concept_id, sig.concepts.size()))
        sink.add(where, "unknown concept #" + std::to_string(l.concept_id));
}

void check_chain(const Signature& sig, const ChainTerm& c, const std::string& where, DefectSink& sink) {
    for (int d : c.path)
        if (!in_range(d, sig.directions.size())) sink.add(where, "unknown direction #" + std::to_string(d));
    if (!in_range(c.feature, sig.features.size())) sink.add(where, "unknown feature #" + std::to_string(c.feature));
}

void check_constraint(const Signature& sig, const SpatialConstraint& c, const std::string& where, DefectSink& sink) {
    if (c.rel.is_empty()) sink.add(where, "empty relation is unsatisfiable");
    check_chain(sig, c.lhs, where, sink);
    check_chain(sig, c.rhs, where, sink);
}

}  // namespace

std::optional<int> Signature::direction(const std::string& name) const { return index_of(directions, name); }
std::optional<int> Signature::concept_id(const std::string& name) const { return index_of(concepts, name); }
std::optional<int> Signature::feature(const std::string& name) const { return index_of(features, name); }

std::vector<Defect> validate(const AlternatingAutomaton& a) {
    DefectSink sink;
    check_signature(a.sig, sink);
    check_names("states", a.states, sink);
    if (a.states.empty()) sink.add("states", "no states declared");
    if (!in_range(a.initial, a.states.size())) sink.add("initial", "unknown state");
    for (int q : a.accepting)
        if (!in_range(q, a.states.size())) sink.add("accepting", "unknown state");
    if (a.delta.size() != a.states.size()) {
        sink.add("delta", "expected one formula per state, found " + std::to_string(a.delta.size()));
        return sink.take();
    }
    for (std::size_t q = 0; q < a.delta.size(); ++q) {
        const std::string where = "delta " + a.states[q];
        for (const auto& g : generators(a.delta[q])) {
            if (auto* l = std::get_if<Literal>(&g)) {
                check_literal(a.sig, *l, where, sink);
            } else if (auto* c = std::get_if<SpatialConstraint>(&g)) {
                check_constraint(a.sig, *c, where, sink);
            } else {
                const auto& m = std::get<Move>(g);
                if (!in_range(m.direction, a.sig.directions.size()))
                    sink.add(where, "unknown direction #" + std::to_string(m.direction));
                if (!in_range(m.state, a.states.size())) sink.add(where, "unknown state #" + std::to_string(m.state));
            }
        }
    }
    return sink.take();
}

std::vector<Defect> validate(const NondetAutomaton& a) {
    DefectSink sink;
    check_signature(a.sig, sink);
    check_names("states", a.states, sink);
    if (a.states.empty()) sink.add("states", "no states declared");
    if (!in_range(a.initial, a.states.size())) sink.add("initial", "unknown state");
    for (int q : a.accepting)
        if (!in_range(q, a.states.size())) sink.add("accepting", "unknown state");
    if (a.delta.size() != a.states.size()) {
        sink.add("delta", "expected one transition set per state, found " + std::to_string(a.delta.size()));
        return sink.take();
    }
    for (std::size_t q = 0; q < a.delta.size(); ++q) {
        for (std::size_t t = 0; t < a.delta[q].size(); ++t) {
            const Transition& tr = a.delta[q][t];
            const std::string where = "delta " + a.states[q] + " #" + std::to_string(t + 1);
            for (const auto& l : tr.literals) check_literal(a.sig, l, where, sink);
            if (!literals_admissible(tr.literals)) sink.add(where, "complementary literals");
            for (const auto& c : tr.constraints) check_constraint(a.sig, c, where, sink);
            if (tr.succ.size() != static_cast<std::size_t>(a.sig.k()))
                sink.add(where, "expected " + std::to_string(a.sig.k()) + " successors, found " +
                                    std::to_string(tr.succ.size()));
            for (int s : tr.succ)
                if (!in_range(s, a.states.size())) sink.add(where, "unknown state #" + std::to_string(s));
        }
    }
    if (a.accept_all) {
        const int qa = *a.accept_all;
        if (!in_range(qa, a.states.size())) {
            sink.add("acceptall", "unknown state");
        } else {
            if (!a.accepting.count(qa)) sink.add("acceptall", "accept-all state must be accepting");
            const Transition loop{{}, {}, std::vector<int>(static_cast<std::size_t>(a.sig.k()), qa)};
            const auto& ts = a.delta[static_cast<std::size_t>(qa)];
            if (ts.size() != 1 || ts.front() != loop)
                sink.add("delta " + a.states[static_cast<std::size_t>(qa)], "accept-all self-loop violated");
        }
    }
    return sink.take();
}

Metrics metrics(const NondetAutomaton& a) {
    std::set<SpatialConstraint> distinct;
    int longest = 1;
    for (const auto& ts : a.delta) {
        for (const auto& t : ts) {
            for (const auto& c : t.constraints) {
                distinct.insert(c);
                longest = std::max({longest, c.lhs.length(), c.rhs.length()});
            }
        }
    }
    return {static_cast<int>(distinct.size()), longest, kArity};
}

// ---------------------------------------------------------------------------

std::string format_word(const Signature& sig, const Word& w) {
    if (w.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += '.';
        out += sig.directions[static_cast<std::size_t>(w[i])];
    }
    return out;
}

std::optional<Word> parse_word(const Signature& sig, const std::string& text) {
    Word w;
    if (text == "ε" || text.empty()) return w;
    std::size_t start = 0;
    while (true) {
        auto dot = text.find('.', start);
        auto d = sig.direction(text.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (!d) return std::nullopt;
        w.push_back(*d);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return w;
}

std::string format_literal(const Signature& sig, const Literal& l) {
    return (l.negated ? "!" : "") + sig.concepts[static_cast<std::size_t>(l.concept_id)];
}

std::string format_chain(const Signature& sig, const ChainTerm& c) {
    std::string out;
    for (int d : c.path) out += sig.directions[static_cast<std::size_t>(d)] + " ";
    return out + sig.features[static_cast<std::size_t>(c.feature)];
}

std::string format_constraint(const Signature& sig, const SpatialConstraint& c) {
    return to_string(c.rel) + "(" + format_chain(sig, c.lhs) + ", " + format_chain(sig, c.rhs) + ")";
}

std::string format_transition(const Signature& sig, const std::vector<std::string>& states, const Transition& t) {
    std::string out = "{ L={";
    for (const auto& l : t.literals) out += " " + format_literal(sig, l);
    out += t.literals.empty() ? "}; X={" : " }; X={";
    for (const auto& c : t.constraints) out += " " + format_constraint(sig, c);
    out += t.constraints.empty() ? "}; succ=(" : " }; succ=(";
    for (std::size_t i = 0; i < t.succ.size(); ++i) {
        if (i) out += ", ";
        out += states[static_cast<std::size_t>(t.succ[i])];
    }
    return out + ") }";
}

std::string variable_name(const Signature& sig, const Word& node, int feature) {
    return "<" + format_word(sig, node) + "," + sig.features[static_cast<std::size_t>(feature)] + ">";
}

// ---------------------------------------------------------------------------

namespace {

Word extend(const Word& base, const std::vector<int>& path) {
    Word w = base;
    w.insert(w.end(), path.begin(), path.end());
    return w;
}

template <class Label, class Fn>
void walk(const LabeledTree<Label>& t, Word& at, Fn&& fn) {
    fn(t, at);
    for (std::size_t d = 0; d < t.children.size(); ++d) {
        at.push_back(static_cast<int>(d));
        walk(t.children[d], at, fn);
        at.pop_back();
    }
}

const SceneTreePrefix* scene_at(const SceneTreePrefix& t, const Word& w) {
    const SceneTreePrefix* node = &t;
    for (int d : w) {
        if (!in_range(d, node->children.size())) return nullptr;
        node = &node->children[static_cast<std::size_t>(d)];
    }
    return node;
}

}  // namespace

Qcsp scene_network(const Signature& sig, const SceneTreePrefix& t) {
    Qcsp net;
    Word at;
    walk(t, at, [&](const SceneTreePrefix& node, const Word&) {
        for (const auto& e : node.label.edges)
            net.constrain(variable_name(sig, e.node_a, e.feature_a), variable_name(sig, e.node_b, e.feature_b), e.rel);
    });
    return net;
}

Qcsp csp_of_run_prefix(const Signature& sig, const RunPrefix& r) {
    Qcsp net;
    Word at;
    walk(r, at, [&](const RunPrefix& node, const Word& w) {
        for (const auto& c : node.label.constraints)
            net.constrain(variable_name(sig, extend(w, c.lhs.path), c.lhs.feature),
                          variable_name(sig, extend(w, c.rhs.path), c.rhs.feature), c.rel);
    });
    return net;
}

RunCheck validate_run_prefix(const NondetAutomaton& a, const RunPrefix& r, const SceneTreePrefix& t) {
    RunCheck out;
    const int horizon = depth(r);
    // declared relation per ordered variable pair; sparse, the prefix can be large
    std::map<std::pair<std::string, std::string>, Relation> scene;
    {
        Word w;
        walk(t, w, [&](const SceneTreePrefix& node, const Word&) {
            for (const auto& e : node.label.edges) {
                const std::string va = variable_name(a.sig, e.node_a, e.feature_a);
                const std::string vb = variable_name(a.sig, e.node_b, e.feature_b);
                auto ab = scene.emplace(std::make_pair(va, vb), Relation::full()).first;
                ab->second &= e.rel;
                auto ba = scene.emplace(std::make_pair(vb, va), Relation::full()).first;
                ba->second &= converse(e.rel);
            }
        });
    }

    if (r.label.state != a.initial) out.defects.push_back({"ε", "(i) root state is not the initial state"});

    Word at;
    walk(r, at, [&](const RunPrefix& node, const Word& w) {
        const std::string where = format_word(a.sig, w);
        const RunLabel& lab = node.label;
        if (!in_range(lab.state, a.states.size())) {
            out.defects.push_back({where, "(i) unknown state"});
            return;
        }
        // (i)
        const bool frontier = node.children.empty();
        if (!frontier && node.children.size() != static_cast<std::size_t>(a.sig.k())) {
            out.defects.push_back({where, "(i) node has " + std::to_string(node.children.size()) + " children"});
            return;
        }
        bool matched = false;
        for (const auto& tr : a.delta[static_cast<std::size_t>(lab.state)]) {
            if (tr.literals != lab.literals || tr.constraints != lab.constraints) continue;
            bool succ_ok = true;
            for (std::size_t d = 0; !frontier && d < node.children.size(); ++d)
                succ_ok = succ_ok && node.children[d].label.state == tr.succ[d];
            if (succ_ok) {
                matched = true;
                break;
            }
        }
        if (!matched)
            out.defects.push_back({where, "(i) no transition of " + a.states[static_cast<std::size_t>(lab.state)] +
                                              " matches the node label"});
        // (ii)
        const SceneTreePrefix* input = scene_at(t, w);
        if (!input) {
            out.defects.push_back({where, "(ii) input tree has no node here"});
            return;
        }
        for (const auto& l : lab.literals) {
            const bool present = input->label.concepts.count(l.concept_id) != 0;
            if (present == l.negated)
                out.defects.push_back({where, "(ii) literal " + format_literal(a.sig, l) + " contradicts the input label"});
        }
        // (iii)
        for (const auto& c : lab.constraints) {
            const Word ta = extend(w, c.lhs.path);
            const Word tb = extend(w, c.rhs.path);
            if (static_cast<int>(std::max(ta.size(), tb.size())) > horizon) {
                out.unchecked_at_horizon.push_back(where + ": " + format_constraint(a.sig, c));
                continue;
            }
            const std::string va = variable_name(a.sig, ta, c.lhs.feature);
            const std::string vb = variable_name(a.sig, tb, c.rhs.feature);
            Relation declared = Relation::full();
            if (va == vb) {
                declared = Atom::EQ;
                if (auto it = scene.find({va, vb}); it != scene.end()) declared &= it->second;
            } else if (auto it = scene.find({va, vb}); it != scene.end()) {
                declared = it->second;
            }
            if ((declared & c.rel).is_empty())
                out.defects.push_back({where, "(iii) " + format_constraint(a.sig, c) + " conflicts with the scene relation " +
                                                  to_string(declared)});
        }
    });
    return out;
}

}  // namespace stbuchi
