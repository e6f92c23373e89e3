#include "stbuchi/io.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"
#include "stbuchi/dsl.hpp"
#include "stbuchi/errors.hpp"

namespace stbuchi {

namespace {

using Json = nlohmann::ordered_json;

Json literal_list(const Signature& sig, const std::set<Literal>& ls) {
    Json out = Json::array();
    for (const auto& l : ls) out.push_back(format_literal(sig, l));
    return out;
}

Json constraint_list(const Signature& sig, const std::set<SpatialConstraint>& cs) {
    Json out = Json::array();
    for (const auto& c : cs) out.push_back(format_constraint(sig, c));
    return out;
}

int state_index(const NondetAutomaton& a, const std::string& name) {
    auto it = std::find(a.states.begin(), a.states.end(), name);
    if (it == a.states.end()) throw MalformedModel("unknown state '" + name + "'");
    return static_cast<int>(it - a.states.begin());
}

Word word_of(const Signature& sig, const std::string& text) {
    auto w = parse_word(sig, text);
    if (!w) throw MalformedModel("bad node address '" + text + "'");
    return *w;
}

template <class Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw MalformedModel(std::string("json: ") + e.what());
    } catch (const SyntaxError& e) {
        throw MalformedModel(std::string("label: ") + e.what());
    }
}

std::set<Literal> read_literals(const Signature& sig, const Json& j) {
    std::set<Literal> out;
    for (const auto& x : j) out.insert(parse_literal(sig, x.get<std::string>()));
    return out;
}

std::set<SpatialConstraint> read_constraints(const Signature& sig, const Json& j) {
    std::set<SpatialConstraint> out;
    for (const auto& x : j) out.insert(parse_constraint(sig, x.get<std::string>()));
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string witness_to_json(const NondetAutomaton& a, const FiniteTreeModel& m) {
    Json doc;
    doc["format"] = kWitnessFormat;
    doc["version"] = kWitnessVersion;
    doc["directions"] = a.sig.directions;
    Json nodes = Json::object();
    for (const auto& n : m.nodes) {
        Json j;
        j["state"] = a.states[static_cast<std::size_t>(n.state)];
        j["literals"] = literal_list(a.sig, n.literals);
        j["constraints"] = constraint_list(a.sig, n.constraints);
        Json children = Json::array();
        for (int c : n.children) children.push_back(format_word(a.sig, m.node(c).word));
        j["children"] = children;
        j["backnode"] = n.backnode ? Json(format_word(a.sig, m.node(*n.backnode).word)) : Json(nullptr);
        Json ptp = Json::array();
        for (const auto& t : n.ptpge)
            ptp.push_back({{"constraint", format_constraint(a.sig, t.constraint)},
                           {"arg", t.arg},
                           {"rest", format_chain(a.sig, t.rest)}});
        j["ptpge"] = ptp;
        nodes[format_word(a.sig, n.word)] = j;
    }
    doc["nodes"] = nodes;
    return doc.dump(2) + "\n";
}

FiniteTreeModel witness_from_json(const NondetAutomaton& a, const std::string& text) {
    return guarded([&] {
        const Json doc = Json::parse(text);
        if (doc.at("format") != kWitnessFormat) throw MalformedModel("not a witness file");
        if (doc.at("version") != kWitnessVersion) throw MalformedModel("unsupported witness version");
        if (doc.at("directions").get<std::vector<std::string>>() != a.sig.directions)
            throw MalformedModel("witness directions differ from the automaton's");
        FiniteTreeModel m;
        m.k = a.sig.k();
        for (const auto& [key, j] : doc.at("nodes").items()) {
            FtmNode n;
            n.word = word_of(a.sig, key);
            n.state = state_index(a, j.at("state").get<std::string>());
            n.literals = read_literals(a.sig, j.at("literals"));
            n.constraints = read_constraints(a.sig, j.at("constraints"));
            for (const auto& t : j.at("ptpge")) {
                const int arg = t.at("arg").get<int>();
                if (arg < 1 || arg > kArity) throw MalformedModel("pending triple argument out of range");
                n.ptpge.insert({parse_constraint(a.sig, t.at("constraint").get<std::string>()), arg,
                                parse_chain(a.sig, t.at("rest").get<std::string>())});
            }
            m.nodes.push_back(std::move(n));
        }
        std::sort(m.nodes.begin(), m.nodes.end(), [](const FtmNode& x, const FtmNode& y) { return lex_less(x.word, y.word); });
        for (std::size_t i = 1; i < m.nodes.size(); ++i)
            if (m.nodes[i - 1].word == m.nodes[i].word) throw MalformedModel("duplicate node address");
        if (m.nodes.empty()) throw MalformedModel("witness has no nodes");
        // second pass: links
        for (auto& n : m.nodes) {
            const Json& j = doc.at("nodes").at(format_word(a.sig, n.word));
            for (const auto& c : j.at("children")) {
                auto id = m.find(word_of(a.sig, c.get<std::string>()));
                if (!id) throw MalformedModel("child '" + c.get<std::string>() + "' is not a node");
                n.children.push_back(*id);
            }
            if (!j.at("backnode").is_null()) {
                auto id = m.find(word_of(a.sig, j.at("backnode").get<std::string>()));
                if (!id) throw MalformedModel("backnode '" + j.at("backnode").get<std::string>() + "' is not a node");
                n.backnode = *id;
            }
        }
        return m;
    });
}

std::string witness_to_dot(const NondetAutomaton& a, const FiniteTreeModel& m) {
    std::string out = "digraph witness {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const auto& n = m.nodes[i];
        std::string label = format_word(a.sig, n.word) + "\n" + a.states[static_cast<std::size_t>(n.state)];
        for (const auto& l : n.literals) label += " " + format_literal(a.sig, l);
        for (const auto& c : n.constraints) label += "\n" + format_constraint(a.sig, c);
        out += "  n" + std::to_string(i) + " [label=" + quote(label) + ", style=" + (n.is_leaf() ? "dashed" : "solid");
        if (a.is_accepting(n.state)) out += ", peripheries=2";
        out += "];\n";
    }
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const auto& n = m.nodes[i];
        for (std::size_t d = 0; d < n.children.size(); ++d)
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(n.children[d]) +
                   " [label=" + quote(a.sig.directions[d]) + "];\n";
        if (n.backnode)
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(*n.backnode) + " [style=dotted, constraint=false];\n";
    }
    return out + "}\n";
}

std::string run_prefix_to_json(const NondetAutomaton& a, const RunPrefix& r) {
    std::function<Json(const RunPrefix&)> enc = [&](const RunPrefix& p) {
        Json j;
        j["label"] = {{"state", a.states[static_cast<std::size_t>(p.label.state)]},
                      {"literals", literal_list(a.sig, p.label.literals)},
                      {"constraints", constraint_list(a.sig, p.label.constraints)}};
        Json cs = Json::array();
        for (const auto& c : p.children) cs.push_back(enc(c));
        j["children"] = cs;
        return j;
    };
    return enc(r).dump(2) + "\n";
}

RunPrefix run_prefix_from_json(const NondetAutomaton& a, const std::string& text) {
    return guarded([&] {
        std::function<RunPrefix(const Json&)> dec = [&](const Json& j) {
            RunPrefix p;
            const Json& l = j.at("label");
            p.label.state = state_index(a, l.at("state").get<std::string>());
            p.label.literals = read_literals(a.sig, l.at("literals"));
            p.label.constraints = read_constraints(a.sig, l.at("constraints"));
            for (const auto& c : j.at("children")) p.children.push_back(dec(c));
            return p;
        };
        return dec(Json::parse(text));
    });
}

std::string scene_to_json(const Signature& sig, const SceneTreePrefix& t) {
    std::function<Json(const SceneTreePrefix&)> enc = [&](const SceneTreePrefix& p) {
        Json concepts = Json::array();
        for (int c : p.label.concepts) concepts.push_back(sig.concepts[static_cast<std::size_t>(c)]);
        Json edges = Json::array();
        for (const auto& e : p.label.edges)
            edges.push_back({{"a", {{"node", format_word(sig, e.node_a)}, {"feature", sig.features[static_cast<std::size_t>(e.feature_a)]}}},
                             {"b", {{"node", format_word(sig, e.node_b)}, {"feature", sig.features[static_cast<std::size_t>(e.feature_b)]}}},
                             {"rel", to_string(e.rel)}});
        Json j;
        j["label"] = {{"concepts", concepts}, {"edges", edges}};
        Json cs = Json::array();
        for (const auto& c : p.children) cs.push_back(enc(c));
        j["children"] = cs;
        return j;
    };
    return enc(t).dump(2) + "\n";
}

SceneTreePrefix scene_from_json(const Signature& sig, const std::string& text) {
    return guarded([&] {
        auto feature = [&](const Json& j) {
            auto f = sig.feature(j.at("feature").get<std::string>());
            if (!f) throw MalformedModel("unknown feature");
            return *f;
        };
        std::function<SceneTreePrefix(const Json&)> dec = [&](const Json& j) {
            SceneTreePrefix p;
            for (const auto& c : j.at("label").at("concepts")) {
                auto id = sig.concept_id(c.get<std::string>());
                if (!id) throw MalformedModel("unknown concept");
                p.label.concepts.insert(*id);
            }
            for (const auto& e : j.at("label").at("edges")) {
                auto rel = relation_from_string(e.at("rel").get<std::string>());
                if (!rel) throw MalformedModel("bad relation");
                p.label.edges.push_back({word_of(sig, e.at("a").at("node").get<std::string>()), feature(e.at("a")),
                                         word_of(sig, e.at("b").at("node").get<std::string>()), feature(e.at("b")), *rel});
            }
            for (const auto& c : j.at("children")) p.children.push_back(dec(c));
            return p;
        };
        return dec(Json::parse(text));
    });
}

}  // namespace stbuchi
