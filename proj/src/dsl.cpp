#include "stbuchi/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "stbuchi/errors.hpp"

namespace stbuchi {

namespace {

enum class Tok { Name, LBrace, RBrace, LParen, RParen, Semi, Colon, Comma, Bar, Amp, Bang, Lt, Gt, Eq, Arrow, End };

const char* tok_text(Tok t) {
    switch (t) {
        case Tok::Name: return "name";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Semi: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Bar: return "'|'";
        case Tok::Amp: return "'&'";
        case Tok::Bang: return "'!'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::Eq: return "'='";
        case Tok::Arrow: return "'->'";
        case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const int l = line, cl = col;
        if (name_start(c)) {
            std::size_t j = i;
            while (j < src.size() && name_char(src[j])) ++j;
            out.push_back({Tok::Name, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (c == '#') {
            out.push_back({Tok::Name, "#", l, cl});
            advance(1);
            continue;
        }
        if (c == '[') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != ']' && src[j] != '\n') ++j;
            if (j == src.size() || src[j] != ']') throw SyntaxError(l, cl, "unterminated '[' name");
            out.push_back({Tok::Name, std::string(src.substr(i, j + 1 - i)), l, cl});
            advance(j + 1 - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", l, cl});
            advance(2);
            continue;
        }
        Tok t;
        switch (c) {
            case '{': t = Tok::LBrace; break;
            case '}': t = Tok::RBrace; break;
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case ';': t = Tok::Semi; break;
            case ':': t = Tok::Colon; break;
            case ',': t = Tok::Comma; break;
            case '|': t = Tok::Bar; break;
            case '&': t = Tok::Amp; break;
            case '!': t = Tok::Bang; break;
            case '<': t = Tok::Lt; break;
            case '>': t = Tok::Gt; break;
            case '=': t = Tok::Eq; break;
            default: throw SyntaxError(l, cl, std::string("unexpected character '") + c + "'");
        }
        out.push_back({t, std::string(1, c), l, cl});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    AutomatonDocument document() {
        AutomatonDocument doc;
        const Token& kind = expect(Tok::Name, "'alternating' or 'nondet'");
        if (kind.text == "alternating") doc.kind = DocKind::Alternating;
        else if (kind.text == "nondet") doc.kind = DocKind::Nondet;
        else fail(kind, "'alternating' or 'nondet'");
        expect(Tok::LBrace);
        std::set<std::string> seen;
        while (!at(Tok::RBrace)) {
            const Token& key = expect(Tok::Name, "a section name or '}'");
            if (key.text == "delta" && !at(Tok::Colon)) {
                doc.delta.push_back(delta(doc));
                continue;
            }
            expect(Tok::Colon);
            if (!seen.insert(key.text).second) throw SyntaxError(key.line, key.column, "duplicate section '" + key.text + "'");
            if (key.text == "directions") doc.directions = names(1);
            else if (key.text == "concepts") doc.concepts = names(0);
            else if (key.text == "features") doc.features = names(0);
            else if (key.text == "states") doc.states = names(1);
            else if (key.text == "accepting") doc.accepting = names(0);
            else if (key.text == "initial") doc.initial = expect(Tok::Name, "a state name").text;
            else if (key.text == "acceptall") doc.acceptall = expect(Tok::Name, "a state name").text;
            else throw SyntaxError(key.line, key.column, "unknown section '" + key.text + "'");
            expect(Tok::Semi);
        }
        expect(Tok::RBrace);
        expect(Tok::End);
        return doc;
    }

    DocConstraint constraint() {
        const Token& start = peek();
        DocConstraint c;
        c.pos = {start.line, start.column};
        if (at(Tok::LBrace)) {
            next();
            c.rel = Relation::empty();
            while (!at(Tok::RBrace)) {
                c.rel |= atom();
                if (!at(Tok::RBrace)) expect(Tok::Comma, "',' or '}'");
            }
            next();
        } else {
            c.rel = atom();
        }
        expect(Tok::LParen);
        c.lhs = chain();
        expect(Tok::Comma);
        c.rhs = chain();
        expect(Tok::RParen);
        return c;
    }

    DocLiteral literal() {
        DocLiteral l;
        const Token& start = peek();
        l.pos = {start.line, start.column};
        if (at(Tok::Bang)) {
            next();
            l.negated = true;
        }
        l.concept_name = expect(Tok::Name, "a concept name").text;
        return l;
    }

    DocChain chain() {
        DocChain c;
        std::vector<std::string> words{expect(Tok::Name, "a chain term").text};
        while (at(Tok::Name)) words.push_back(next().text);
        c.feature = words.back();
        words.pop_back();
        c.path = std::move(words);
        return c;
    }

    void finish() { expect(Tok::End); }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(Tok t) const { return peek().kind == t; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const Token& t, const std::string& expected) const {
        const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(t.line, t.column, "expected " + expected + ", found " + found);
    }
    const Token& expect(Tok t, const std::string& what = "") {
        if (!at(t)) fail(peek(), what.empty() ? tok_text(t) : what);
        return next();
    }
    void keyword(const char* word) {
        const Token& t = peek();
        if (t.kind != Tok::Name || t.text != word) fail(t, std::string("'") + word + "'");
        next();
    }

    std::vector<std::string> names(std::size_t min) {
        std::vector<std::string> out;
        while (at(Tok::Name)) out.push_back(next().text);
        if (out.size() < min) fail(peek(), "a name");
        return out;
    }

    Relation atom() {
        const Token& t = expect(Tok::Name, "a relation name");
        auto a = atom_from_name(t.text);
        if (!a) throw SyntaxError(t.line, t.column, "unknown relation '" + t.text + "'");
        return *a;
    }

    DocDelta delta(const AutomatonDocument& doc) {
        DocDelta d;
        const Token& st = expect(Tok::Name, "a state name");
        d.state = st.text;
        d.pos = {st.line, st.column};
        expect(Tok::Arrow);
        if (doc.kind == DocKind::Alternating) {
            d.formula = disjunction();
        } else {
            d.transitions.push_back(transition(doc));
            while (at(Tok::Bar)) {
                next();
                d.transitions.push_back(transition(doc));
            }
        }
        expect(Tok::Semi, "';' or '|'");
        return d;
    }

    DocTransition transition(const AutomatonDocument& doc) {
        DocTransition t;
        const Token& open = expect(Tok::LBrace, "'{' starting a transition");
        t.pos = {open.line, open.column};
        keyword("L");
        expect(Tok::Eq);
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            t.literals.push_back(literal());
            if (at(Tok::Comma)) next();
        }
        next();
        expect(Tok::Semi);
        keyword("X");
        expect(Tok::Eq);
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            t.constraints.push_back(constraint());
            if (at(Tok::Comma)) next();
        }
        next();
        expect(Tok::Semi);
        keyword("succ");
        expect(Tok::Eq);
        const Token& lp = expect(Tok::LParen);
        t.succ.push_back(expect(Tok::Name, "a state name").text);
        while (at(Tok::Comma)) {
            next();
            t.succ.push_back(expect(Tok::Name, "a state name").text);
        }
        expect(Tok::RParen, "',' or ')'");
        if (!doc.directions.empty() && t.succ.size() != doc.directions.size())
            throw SyntaxError(lp.line, lp.column,
                              "expected " + std::to_string(doc.directions.size()) + " successors, found " +
                                  std::to_string(t.succ.size()));
        if (at(Tok::Semi)) next();
        expect(Tok::RBrace);
        return t;
    }

    DocFormula disjunction() {
        std::vector<DocFormula> parts{conjunction()};
        while (at(Tok::Bar)) {
            next();
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? std::move(parts.front()) : DocFormula::disj(std::move(parts));
    }

    DocFormula conjunction() {
        std::vector<DocFormula> parts{unary()};
        while (at(Tok::Amp)) {
            next();
            parts.push_back(unary());
        }
        return parts.size() == 1 ? std::move(parts.front()) : DocFormula::conj(std::move(parts));
    }

    DocFormula unary() {
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            next();
            DocFormula f = disjunction();
            expect(Tok::RParen);
            return f;
        }
        if (t.kind == Tok::Lt) {
            next();
            DocMove m;
            m.pos = {t.line, t.column};
            m.direction = expect(Tok::Name, "a direction").text;
            expect(Tok::Colon);
            m.state = expect(Tok::Name, "a state name").text;
            expect(Tok::Gt);
            return DocFormula::atom(m);
        }
        if (t.kind == Tok::LBrace || (t.kind == Tok::Name && peek(1).kind == Tok::LParen))
            return DocFormula::atom(constraint());
        if (t.kind == Tok::Bang || t.kind == Tok::Name) return DocFormula::atom(literal());
        fail(t, "a literal, move, constraint or '('");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// --- printing ---------------------------------------------------------------

std::string join(const std::vector<std::string>& xs, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

std::string print_chain(const DocChain& c) {
    std::string out;
    for (const auto& d : c.path) out += d + " ";
    return out + c.feature;
}

std::string print_constraint(const DocConstraint& c) {
    return to_string(c.rel) + "(" + print_chain(c.lhs) + ", " + print_chain(c.rhs) + ")";
}

std::string print_literal(const DocLiteral& l) { return (l.negated ? "!" : "") + l.concept_name; }

std::string print_formula(const DocFormula& f, bool nested) {
    switch (f.kind) {
        case DocFormula::Kind::Leaf:
            if (auto* l = std::get_if<DocLiteral>(&f.leaf)) return print_literal(*l);
            if (auto* c = std::get_if<DocConstraint>(&f.leaf)) return print_constraint(*c);
            return "<" + std::get<DocMove>(f.leaf).direction + ":" + std::get<DocMove>(f.leaf).state + ">";
        case DocFormula::Kind::And:
        case DocFormula::Kind::Or: {
            std::vector<std::string> parts;
            for (const auto& c : f.children) parts.push_back(print_formula(c, true));
            const std::string body = join(parts, f.kind == DocFormula::Kind::And ? " & " : " | ");
            return nested || f.children.size() < 2 ? "(" + body + ")" : body;
        }
    }
    return "";
}

std::string print_transition(const DocTransition& t) {
    std::vector<std::string> lits, cons;
    for (const auto& l : t.literals) lits.push_back(print_literal(l));
    for (const auto& c : t.constraints) cons.push_back(print_constraint(c));
    return "{ L={" + join(lits) + "}; X={" + join(cons) + "}; succ=(" + join(t.succ, ", ") + ") }";
}

// --- resolution ---------------------------------------------------------------

std::string at_pos(const SourcePos& p) { return std::to_string(p.line) + ":" + std::to_string(p.column); }

class Resolver {
public:
    Resolver(const AutomatonDocument& doc, std::vector<Defect>& defects) : doc_(doc), defects_(defects) {
        sig_ = Signature{doc.directions, doc.concepts, doc.features};
    }

    const Signature& sig() const { return sig_; }

    int state(const std::string& name, const std::string& where) {
        auto it = std::find(doc_.states.begin(), doc_.states.end(), name);
        if (it == doc_.states.end()) {
            defects_.push_back({where, "unknown state '" + name + "'"});
            return 0;
        }
        return static_cast<int>(it - doc_.states.begin());
    }

    Literal literal(const DocLiteral& l) {
        auto c = sig_.concept_id(l.concept_name);
        if (!c) defects_.push_back({at_pos(l.pos), "unknown concept '" + l.concept_name + "'"});
        return Literal{c.value_or(0), l.negated};
    }

    ChainTerm chain(const DocChain& c, const SourcePos& pos) {
        ChainTerm out;
        for (const auto& d : c.path) {
            auto dir = sig_.direction(d);
            if (!dir) defects_.push_back({at_pos(pos), "unknown direction '" + d + "'"});
            out.path.push_back(dir.value_or(0));
        }
        auto f = sig_.feature(c.feature);
        if (!f) defects_.push_back({at_pos(pos), "unknown feature '" + c.feature + "'"});
        out.feature = f.value_or(0);
        return out;
    }

    SpatialConstraint constraint(const DocConstraint& c) {
        return SpatialConstraint{c.rel, chain(c.lhs, c.pos), chain(c.rhs, c.pos)};
    }

    Formula formula(const DocFormula& f) {
        if (f.kind == DocFormula::Kind::Leaf) {
            if (auto* l = std::get_if<DocLiteral>(&f.leaf)) return Formula::atom(literal(*l));
            if (auto* c = std::get_if<DocConstraint>(&f.leaf)) return Formula::atom(constraint(*c));
            const auto& m = std::get<DocMove>(f.leaf);
            auto dir = sig_.direction(m.direction);
            if (!dir) defects_.push_back({at_pos(m.pos), "unknown direction '" + m.direction + "'"});
            return Formula::atom(Move{dir.value_or(0), state(m.state, at_pos(m.pos))});
        }
        std::vector<Formula> cs;
        for (const auto& c : f.children) cs.push_back(formula(c));
        return f.kind == DocFormula::Kind::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }

private:
    const AutomatonDocument& doc_;
    std::vector<Defect>& defects_;
    Signature sig_;
};

DocChain doc_chain(const Signature& sig, const ChainTerm& c) {
    DocChain out;
    for (int d : c.path) out.path.push_back(sig.directions[static_cast<std::size_t>(d)]);
    out.feature = sig.features[static_cast<std::size_t>(c.feature)];
    return out;
}

DocConstraint doc_constraint(const Signature& sig, const SpatialConstraint& c) {
    return DocConstraint{c.rel, doc_chain(sig, c.lhs), doc_chain(sig, c.rhs), {}};
}

DocLiteral doc_literal(const Signature& sig, const Literal& l) {
    return DocLiteral{sig.concepts[static_cast<std::size_t>(l.concept_id)], l.negated, {}};
}

template <class A>
AutomatonDocument header(const A& a, DocKind kind) {
    AutomatonDocument doc;
    doc.kind = kind;
    doc.directions = a.sig.directions;
    doc.concepts = a.sig.concepts;
    doc.features = a.sig.features;
    doc.states = a.states;
    doc.initial = a.states[static_cast<std::size_t>(a.initial)];
    for (int q : a.accepting) doc.accepting.push_back(a.states[static_cast<std::size_t>(q)]);
    return doc;
}

DocFormula doc_formula(const AlternatingAutomaton& a, const Formula& f) {
    if (f.kind == Formula::Kind::Leaf) {
        if (auto* l = std::get_if<Literal>(&f.leaf)) return DocFormula::atom(doc_literal(a.sig, *l));
        if (auto* c = std::get_if<SpatialConstraint>(&f.leaf)) return DocFormula::atom(doc_constraint(a.sig, *c));
        const auto& m = std::get<Move>(f.leaf);
        return DocFormula::atom(DocMove{a.sig.directions[static_cast<std::size_t>(m.direction)],
                                        a.states[static_cast<std::size_t>(m.state)], {}});
    }
    // single-child nodes have no text form of their own
    if (f.children.size() == 1) return doc_formula(a, f.children.front());
    std::vector<DocFormula> cs;
    for (const auto& c : f.children) cs.push_back(doc_formula(a, c));
    return f.kind == Formula::Kind::And ? DocFormula::conj(std::move(cs)) : DocFormula::disj(std::move(cs));
}

}  // namespace

AutomatonDocument parse_document(std::string_view text) { return Parser(text).document(); }

std::string print_document(const AutomatonDocument& doc) {
    std::string out = doc.kind == DocKind::Alternating ? "alternating {\n" : "nondet {\n";
    auto line = [&](const char* key, const std::vector<std::string>& xs) {
        out += std::string("  ") + key + ":" + (xs.empty() ? "" : " " + join(xs)) + ";\n";
    };
    line("directions", doc.directions);
    line("concepts", doc.concepts);
    line("features", doc.features);
    line("states", doc.states);
    line("initial", {doc.initial});
    line("accepting", doc.accepting);
    if (doc.acceptall) line("acceptall", {*doc.acceptall});
    for (const auto& d : doc.delta) {
        const std::string lead = "  delta " + d.state + " -> ";
        if (d.formula) {
            out += lead + print_formula(*d.formula, false) + ";\n";
            continue;
        }
        for (std::size_t i = 0; i < d.transitions.size(); ++i) {
            out += (i == 0 ? lead : std::string(lead.size() - 2, ' ') + "| ") + print_transition(d.transitions[i]);
            out += i + 1 == d.transitions.size() ? ";\n" : "\n";
        }
    }
    return out + "}\n";
}

Resolution resolve(const AutomatonDocument& doc) {
    Resolution res;
    auto& defects = res.defects;
    Resolver r(doc, defects);
    const int initial = r.state(doc.initial, "initial");
    std::set<int> accepting;
    for (const auto& q : doc.accepting) accepting.insert(r.state(q, "accepting"));

    std::map<std::string, const DocDelta*> by_state;
    for (const auto& d : doc.delta) {
        r.state(d.state, at_pos(d.pos));
        if (!by_state.emplace(d.state, &d).second)
            defects.push_back({at_pos(d.pos), "duplicate delta for state '" + d.state + "'"});
    }

    if (doc.kind == DocKind::Alternating) {
        AlternatingAutomaton a;
        a.sig = r.sig();
        a.states = doc.states;
        a.initial = initial;
        a.accepting = accepting;
        if (doc.acceptall) defects.push_back({"acceptall", "only nondet automata declare an accept-all state"});
        for (const auto& q : doc.states) {
            auto it = by_state.find(q);
            if (it == by_state.end()) {
                defects.push_back({"delta", "missing delta for state '" + q + "'"});
                a.delta.push_back(Formula::disj({}));
                continue;
            }
            a.delta.push_back(r.formula(*it->second->formula));
        }
        if (defects.empty()) defects = validate(a);
        if (defects.empty()) res.automaton = std::move(a);
        return res;
    }

    NondetAutomaton a;
    a.sig = r.sig();
    a.states = doc.states;
    a.initial = initial;
    a.accepting = accepting;
    if (doc.acceptall) a.accept_all = r.state(*doc.acceptall, "acceptall");
    for (const auto& q : doc.states) {
        std::vector<Transition> ts;
        auto it = by_state.find(q);
        if (it != by_state.end()) {
            for (const auto& t : it->second->transitions) {
                Transition tr;
                for (const auto& l : t.literals) tr.literals.insert(r.literal(l));
                for (const auto& c : t.constraints) tr.constraints.insert(r.constraint(c));
                for (const auto& s : t.succ) tr.succ.push_back(r.state(s, at_pos(t.pos)));
                if (tr.succ.size() != doc.directions.size())
                    defects.push_back({at_pos(t.pos), "expected " + std::to_string(doc.directions.size()) +
                                                          " successors, found " + std::to_string(tr.succ.size())});
                ts.push_back(std::move(tr));
            }
        }
        a.delta.push_back(std::move(ts));
    }
    if (defects.empty()) defects = validate(a);
    if (defects.empty()) res.automaton = std::move(a);
    return res;
}

AutomatonDocument to_document(const NondetAutomaton& a) {
    AutomatonDocument doc = header(a, DocKind::Nondet);
    if (a.accept_all) doc.acceptall = a.states[static_cast<std::size_t>(*a.accept_all)];
    for (std::size_t q = 0; q < a.states.size(); ++q) {
        if (a.delta[q].empty()) continue;
        DocDelta d;
        d.state = a.states[q];
        for (const auto& t : a.delta[q]) {
            DocTransition dt;
            for (const auto& l : t.literals) dt.literals.push_back(doc_literal(a.sig, l));
            for (const auto& c : t.constraints) dt.constraints.push_back(doc_constraint(a.sig, c));
            for (int s : t.succ) dt.succ.push_back(a.states[static_cast<std::size_t>(s)]);
            d.transitions.push_back(std::move(dt));
        }
        doc.delta.push_back(std::move(d));
    }
    return doc;
}

AutomatonDocument to_document(const AlternatingAutomaton& a) {
    AutomatonDocument doc = header(a, DocKind::Alternating);
    for (std::size_t q = 0; q < a.states.size(); ++q) {
        DocDelta d;
        d.state = a.states[q];
        d.formula = doc_formula(a, a.delta[q]);
        doc.delta.push_back(std::move(d));
    }
    return doc;
}

namespace {

template <class T, class Fn>
T parse_fragment(std::string_view text, Fn&& fn) {
    Parser p(text);
    T out = fn(p);
    p.finish();
    return out;
}

void raise_defects(const std::vector<Defect>& defects, std::string_view text) {
    if (!defects.empty()) throw SyntaxError(1, 1, defects.front().message + " in '" + std::string(text) + "'");
}

}  // namespace

SpatialConstraint parse_constraint(const Signature& sig, std::string_view text) {
    const auto c = parse_fragment<DocConstraint>(text, [](Parser& p) { return p.constraint(); });
    std::vector<Defect> defects;
    AutomatonDocument doc;
    doc.directions = sig.directions;
    doc.concepts = sig.concepts;
    doc.features = sig.features;
    Resolver r(doc, defects);
    auto out = r.constraint(c);
    raise_defects(defects, text);
    return out;
}

Literal parse_literal(const Signature& sig, std::string_view text) {
    const auto l = parse_fragment<DocLiteral>(text, [](Parser& p) { return p.literal(); });
    auto c = sig.concept_id(l.concept_name);
    if (!c) throw SyntaxError(1, 1, "unknown concept '" + l.concept_name + "'");
    return Literal{*c, l.negated};
}

ChainTerm parse_chain(const Signature& sig, std::string_view text) {
    const auto c = parse_fragment<DocChain>(text, [](Parser& p) { return p.chain(); });
    std::vector<Defect> defects;
    AutomatonDocument doc;
    doc.directions = sig.directions;
    doc.features = sig.features;
    Resolver r(doc, defects);
    auto out = r.chain(c, {});
    raise_defects(defects, text);
    return out;
}

}  // namespace stbuchi
