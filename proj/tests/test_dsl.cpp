#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "stbuchi/dsl.hpp"
#include "stbuchi/errors.hpp"

using namespace stbuchi;

#ifndef STBUCHI_CORPUS_DIR
#define STBUCHI_CORPUS_DIR "corpus"
#endif

namespace {

const char* kMinimal = R"(nondet {
  directions: d1 d2;
  concepts: A;
  features: g h;
  states: q0;
  initial: q0;
  accepting: q0;
  delta q0 -> { L={A}; X={TPP(g, d1 d2 h) {dc, ec}(h, g)}; succ=(q0, q0) };
}
)";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SyntaxError syntax_error_of(const std::string& text) {
    try {
        parse_document(text);
    } catch (const SyntaxError& e) {
        return e;
    }
    FAIL("no syntax error");
    return SyntaxError(0, 0, "");
}

}  // namespace

TEST_CASE("minimal nondet document") {
    const auto doc = parse_document(kMinimal);
    CHECK(doc.kind == DocKind::Nondet);
    CHECK(doc.states.size() == 1);
    REQUIRE(doc.delta.size() == 1);
    REQUIRE(doc.delta[0].transitions.size() == 1);
    const auto& t = doc.delta[0].transitions[0];
    CHECK(t.constraints.size() == 2);
    CHECK(t.constraints[1].rel == Relation{Atom::DC, Atom::EC});
    CHECK(t.constraints[0].lhs.feature == "g");
    CHECK(t.constraints[0].rhs.path == std::vector<std::string>{"d1", "d2"});

    const auto r = resolve(doc);
    REQUIRE(r.automaton);
    const auto& a = std::get<NondetAutomaton>(*r.automaton);
    CHECK(metrics(a) == Metrics{2, 3, 2});
    CHECK(parse_document(print_document(doc)) == doc);
}

TEST_CASE("syntax errors carry positions") {
    auto e = syntax_error_of("nondet {\n  directions: d1 d2;\n  states q0;\n}");
    CHECK(e.line() == 3);
    CHECK(e.column() == 10);
    CHECK(std::string(e.what()).find("expected ':'") != std::string::npos);

    const std::string arity = R"(nondet {
  directions: d1 d2;
  states: q0;
  delta q0 -> { L={}; X={}; succ=(q0, q0, q0) };
})";
    e = syntax_error_of(arity);
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("expected 2 successors, found 3") != std::string::npos);

    e = syntax_error_of("nondet { directions: d1; delta q -> { L={}; X={FOO(g, g)}; succ=(q) }; }");
    CHECK(std::string(e.what()).find("unknown relation 'FOO'") != std::string::npos);
    CHECK_THROWS_AS(parse_document("nondet { directions: d1; directions: d2; }"), SyntaxError);
    CHECK_THROWS_AS(parse_document("nondet { states: [q0:1; }"), SyntaxError);
    CHECK_THROWS_AS(parse_document("tree { }"), SyntaxError);
}

TEST_CASE("resolution defects") {
    auto doc = parse_document(R"(nondet {
  directions: d1;
  concepts: A;
  features: g;
  states: q0 #;
  initial: q0;
  accepting: q0;
  acceptall: #;
  delta q0 -> { L={B}; X={}; succ=(q9) };
  delta # -> { L={}; X={}; succ=(#) } | { L={A}; X={}; succ=(#) };
})");
    auto r = resolve(doc);
    CHECK_FALSE(r.automaton);
    std::vector<std::string> msgs;
    for (const auto& d : r.defects) msgs.push_back(d.message);
    CHECK(std::count(msgs.begin(), msgs.end(), "unknown concept 'B'") == 1);
    CHECK(std::count(msgs.begin(), msgs.end(), "unknown state 'q9'") == 1);
    CHECK(r.defects.front().location == "9:20");

    doc.delta[0].transitions[0] = parse_document(R"(nondet { directions: d1; delta q0 -> { L={A}; X={}; succ=(q0) }; })")
                                      .delta[0]
                                      .transitions[0];
    r = resolve(doc);
    REQUIRE(r.defects.size() == 2);  // # not accepting, extra # transition
    CHECK(r.defects[1].message == "accept-all self-loop violated");
}

TEST_CASE("alternating formulas") {
    const auto doc = parse_document(R"(alternating {
  directions: d1 d2;
  concepts: A B;
  features: g;
  states: s t;
  initial: s;
  accepting: t;
  delta s -> A & (<d1:s> | <d2:t> & !B) | {TPP,EQ}(g, d1 g);
  delta t -> ((<d1:t>) & <d2:t>) & B;
})");
    const auto& f = *doc.delta[0].formula;
    REQUIRE(f.kind == DocFormula::Kind::Or);
    CHECK(f.children.size() == 2);
    CHECK(f.children[0].kind == DocFormula::Kind::And);
    CHECK(parse_document(print_document(doc)) == doc);
    const auto r = resolve(doc);
    REQUIRE(r.automaton);
    const auto& a = std::get<AlternatingAutomaton>(*r.automaton);
    CHECK(dnf(a.delta[0]).size() == 3);
    CHECK(parse_document(print_document(to_document(a))) == to_document(a));

    auto missing = doc;
    missing.delta.pop_back();
    CHECK_FALSE(resolve(missing).automaton);
}

TEST_CASE("fragments") {
    const Signature sig{{"d1", "d2"}, {"A"}, {"g", "h"}};
    CHECK(parse_constraint(sig, "{TPP,EQ}(g, d1 h)") == SpatialConstraint{{Atom::TPP, Atom::EQ}, {{}, 0}, {{0}, 1}});
    CHECK(parse_literal(sig, "!A") == Literal{0, true});
    CHECK(parse_chain(sig, "d2 d1 g") == ChainTerm{{1, 0}, 0});
    CHECK_THROWS_AS(parse_chain(sig, "d3 g"), SyntaxError);
    CHECK_THROWS_AS(parse_constraint(sig, "TPP(g, h) extra"), SyntaxError);
    CHECK(format_constraint(sig, parse_constraint(sig, "{tpp,eq}(g, d1 h)")) == "{TPP,EQ}(g, d1 h)");
}

TEST_CASE("corpus files parse, validate and round-trip") {
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(STBUCHI_CORPUS_DIR)) {
        if (entry.path().extension() != ".aut") continue;
        ++files;
        INFO(entry.path().string());
        const auto doc = parse_document(slurp(entry.path()));
        const auto printed = print_document(doc);
        CHECK(parse_document(printed) == doc);
        CHECK(print_document(parse_document(printed)) == printed);
        const auto r = resolve(doc);
        CHECK(r.defects.empty());
    }
    CHECK(files >= 10);
}

TEST_CASE("random automata round-trip through text") {
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto n = gen::random_nondet(rng, 4, 2, true);
        const auto doc = to_document(n);
        const auto back = parse_document(print_document(doc));
        CHECK(back == doc);
        const auto r = resolve(back);
        if (!r.automaton) continue;  // e.g. generated complementary literals
        const auto& m = std::get<NondetAutomaton>(*r.automaton);
        CHECK(m.delta == n.delta);
        const auto alt = gen::random_alternating(rng);
        CHECK(parse_document(print_document(to_document(alt))) == to_document(alt));
    }
}
