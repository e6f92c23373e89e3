#pragma once

// Text format for automata (`.aut`): parse, print, and resolve to automata.
//
//   nondet {
//     directions: d1 d2;
//     concepts: A;
//     features: g;
//     states: q0;
//     initial: q0;
//     accepting: q0;
//     delta q0 -> { L={A}; X={TPP(g, d1 g)}; succ=(q0, q0) };
//   }

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stbuchi/automata.hpp"
#include "stbuchi/formula.hpp"

namespace stbuchi {

/// Source location; always compares equal so documents compare by content.
struct SourcePos {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

struct DocLiteral {
    std::string concept_name;
    bool negated = false;
    SourcePos pos;

    friend bool operator==(const DocLiteral&, const DocLiteral&) = default;
};

struct DocChain {
    std::vector<std::string> path;
    std::string feature;

    friend bool operator==(const DocChain&, const DocChain&) = default;
};

struct DocConstraint {
    Relation rel;
    DocChain lhs;
    DocChain rhs;
    SourcePos pos;

    friend bool operator==(const DocConstraint&, const DocConstraint&) = default;
};

struct DocMove {
    std::string direction;
    std::string state;
    SourcePos pos;

    friend bool operator==(const DocMove&, const DocMove&) = default;
};

using DocGenerator = std::variant<DocLiteral, DocConstraint, DocMove>;
using DocFormula = FormulaTree<DocGenerator>;

struct DocTransition {
    std::vector<DocLiteral> literals;
    std::vector<DocConstraint> constraints;
    std::vector<std::string> succ;
    SourcePos pos;

    friend bool operator==(const DocTransition&, const DocTransition&) = default;
};

struct DocDelta {
    std::string state;
    std::optional<DocFormula> formula;        // alternating
    std::vector<DocTransition> transitions;   // nondet
    SourcePos pos;

    friend bool operator==(const DocDelta&, const DocDelta&) = default;
};

enum class DocKind { Alternating, Nondet };

struct AutomatonDocument {
    DocKind kind = DocKind::Nondet;
    std::vector<std::string> directions;
    std::vector<std::string> concepts;
    std::vector<std::string> features;
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::string> accepting;
    std::optional<std::string> acceptall;
    std::vector<DocDelta> delta;

    friend bool operator==(const AutomatonDocument&, const AutomatonDocument&) = default;
};

/// Throws SyntaxError with line and column.
AutomatonDocument parse_document(std::string_view text);
std::string print_document(const AutomatonDocument& doc);

using Automaton = std::variant<AlternatingAutomaton, NondetAutomaton>;

struct Resolution {
    std::optional<Automaton> automaton;  // set when there are no defects
    std::vector<Defect> defects;
};

/// Binds names to the signature and runs validate().
Resolution resolve(const AutomatonDocument& doc);

AutomatonDocument to_document(const NondetAutomaton& a);
AutomatonDocument to_document(const AlternatingAutomaton& a);

/// `TPP(g, d1 g)` or `{TPP,EQ}(g, d1 g)` against a signature.
SpatialConstraint parse_constraint(const Signature& sig, std::string_view text);
/// `A` or `!A`.
Literal parse_literal(const Signature& sig, std::string_view text);
/// `d1 d2 g`
ChainTerm parse_chain(const Signature& sig, std::string_view text);

}  // namespace stbuchi
