// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "stbuchi/dsl.hpp"
#include "stbuchi/emptiness.hpp"
#include "stbuchi/errors.hpp"
#include "stbuchi/formula.hpp"
#include "stbuchi/simulate.hpp"

using namespace stbuchi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> problems;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (problems.size() < 8) problems.push_back(what);
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double x, int digits = 2) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(digits);
    ss << x;
    return ss.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> corpus_files() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(STBUCHI_CORPUS_DIR))
        if (e.path().extension() == ".aut") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

Automaton load(const fs::path& p) {
    const auto r = resolve(parse_document(read_file(p)));
    if (!r.automaton) throw std::runtime_error(p.string() + ": defects");
    return *r.automaton;
}

NondetAutomaton load_nondet(const fs::path& p) {
    Automaton a = load(p);
    if (auto* n = std::get_if<NondetAutomaton>(&a)) return *n;
    return simulate(std::get<AlternatingAutomaton>(a));
}

// ---------------------------------------------------------------------------
// independent witness checks

bool lex_le(const Word& a, const Word& b) { return !std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()); }

bool strict_prefix(const Word& u, const Word& v) {
    return u.size() < v.size() && std::equal(u.begin(), u.end(), v.begin());
}

long long independent_internal_bound(const NondetAutomaton& a) {
    std::set<SpatialConstraint> cs;
    int longest = 1;
    for (const auto& ts : a.delta)
        for (const auto& t : ts)
            for (const auto& c : t.constraints) {
                cs.insert(c);
                longest = std::max({longest, static_cast<int>(c.lhs.path.size()) + 1,
                                    static_cast<int>(c.rhs.path.size()) + 1});
            }
    const long long nc = std::max<long long>(static_cast<long long>(cs.size()), 1);
    return static_cast<long long>(a.states.size()) * nc * longest * 2;
}

void check_leaf_contract(const FiniteTreeModel& m, Outcome& o, const std::string& tag) {
    for (const auto& v : m.nodes) {
        if (!v.is_leaf()) continue;
        if (!v.backnode) {
            o.expect(false, tag + ": leaf without backnode");
            continue;
        }
        const auto& u = m.node(*v.backnode);
        o.expect(!u.is_leaf(), tag + ": backnode is a leaf");
        o.expect(u.state == v.state && u.ptpge == v.ptpge, tag + ": leaf signature differs from backnode");
        o.expect(lex_le(u.word, v.word) && u.word != v.word, tag + ": backnode not lex-smaller");
    }
}

void check_no_third_key_point(const NondetAutomaton& a, const FiniteTreeModel& m, Outcome& o, const std::string& tag) {
    for (const auto& v : m.nodes) {
        if (!v.is_leaf() || !v.backnode) continue;
        const auto& u = m.node(*v.backnode);
        if (!strict_prefix(u.word, v.word)) continue;
        bool found = false;
        for (const auto& w : m.nodes)
            if (lex_le(u.word, w.word) && lex_le(w.word, v.word) && a.is_accepting(w.state)) found = true;
        o.expect(found, tag + ": third-key-point leaf");
    }
}

// Every root-to-frontier path visits an accepting state within each window.
bool windows_accepting(const NondetAutomaton& a, const RunPrefix& r, int window, int since = 0) {
    const int s = a.is_accepting(r.label.state) ? 0 : since + 1;
    if (s > window) return false;
    for (const auto& c : r.children)
        if (!windows_accepting(a, c, window, s)) return false;
    return true;
}

struct WitnessTally {
    int witnesses = 0;
    int clamped = 0;
    int bound_clamped = 0;
};

void check_one_witness(const NondetAutomaton& a, const FiniteTreeModel& m, Outcome& o, WitnessTally& t,
                       const std::string& tag) {
    ++t.witnesses;
    // bounds, by direct count
    const long long ib = independent_internal_bound(a);
    int internal = 0, leaves = 0;
    for (const auto& n : m.nodes) (n.is_leaf() ? leaves : internal)++;
    o.expect(internal <= ib, tag + ": internal " + std::to_string(internal) + " > " + std::to_string(ib));
    o.expect(leaves <= ib * a.sig.k(), tag + ": leaves over bound");
    const auto br = check_bounds(m, metrics(a), static_cast<int>(a.states.size()));
    o.expect(br.ok(), tag + ": check_bounds rejects");
    if (br.clamped) ++t.bound_clamped;

    check_leaf_contract(m, o, tag);
    check_no_third_key_point(a, m, o, tag);

    const int h = std::max(m.height(), 1);
    WitnessCheckOptions opt;
    opt.unfold_depths = {1, 2, 3 * h};
    const auto r = check_witness(a, m, opt);
    o.expect(r.ok(), tag + ": check_witness: " + (r.failures.empty() ? "" : r.failures.front()));
    if (clamp_unfold_depth(m.k, 3 * h) != 3 * h) ++t.clamped;
    for (int d : {1, 2}) {
        const auto prefix = unfold(m, d);
        o.expect(is_consistent(csp_of_run_prefix(a.sig, prefix)), tag + ": prefix network inconsistent");
    }
    const int d3 = clamp_unfold_depth(m.k, 3 * h);
    o.expect(windows_accepting(a, unfold(m, d3), 2 * h), tag + ": accepting window violated");
}

// ---------------------------------------------------------------------------

Outcome algebra_integrity() {
    Outcome o;
    const auto t0 = Clock::now();
    int pairs = 0;
    for (Atom a : kAllAtoms) {
        o.expect(compose(Atom::EQ, a) == Relation(a) && compose(a, Atom::EQ) == Relation(a), "EQ identity");
        for (Atom b : kAllAtoms) {
            ++pairs;
            o.expect(converse(compose(a, b)) == compose(converse(b), converse(a)), "converse of composition");
            for (Atom c : kAllAtoms) {
                const bool x = compose(a, b).contains(c);
                const bool y = compose(converse(a), Relation(c)).contains(b);
                const bool z = compose(Relation(c), converse(b)).contains(a);
                o.expect(x == y && y == z, "Peircean law");
            }
        }
    }
    for (int i = 0; i < 256; ++i) {
        const Relation r(static_cast<std::uint8_t>(i));
        o.expect(converse(converse(r)) == r, "converse involution");
    }
    const double s = seconds_since(t0);
    o.expect(s < 1.0, "took " + fixed(s) + " s");
    o.detail = std::to_string(pairs) + " atom pairs, 256 relations, " + fixed(s, 3) + " s";
    return o;
}

Outcome path_consistency_adequacy() {
    Outcome o;
    std::mt19937 rng(2024);
    int agree = 0, consistent = 0;
    for (int i = 0; i < 200; ++i) {
        const Qcsp n = oracle::random_atomic_network(rng, i);
        const bool expect = oracle::brute_force_consistent(n);
        consistent += expect;
        if (is_consistent(n) == expect) ++agree;
        else o.expect(false, "network " + std::to_string(i));
    }
    o.detail = std::to_string(agree) + "/200 agree (" + std::to_string(consistent) + " consistent)";
    return o;
}

Outcome dnf_equivalence() {
    Outcome o;
    std::mt19937 rng(99);
    std::function<Formula(int, int)> random = [&](int gens, int depth) {
        if (depth == 0 || rng() % 4 == 0) return Formula::atom(Literal{static_cast<int>(rng() % gens), false});
        std::vector<Formula> cs;
        const int width = 2 + static_cast<int>(rng() % 2);
        for (int i = 0; i < width; ++i) cs.push_back(random(gens, depth - 1));
        return rng() % 2 ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    };
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        const int gens = 1 + i % 6;
        const Formula f = random(gens, 4);
        const auto d = dnf(f);
        bool same = true;
        for (unsigned mask = 0; mask < (1u << gens); ++mask) {
            // the DNF is evaluated directly as an or of ands
            auto holds = [&](const Generator& g) { return ((mask >> std::get<Literal>(g).concept_id) & 1u) != 0; };
            bool any = false;
            for (const auto& conj : d) any = any || std::all_of(conj.begin(), conj.end(), holds);
            same = same && evaluate(f, holds) == any;
        }
        ok += same;
        o.expect(same, "formula " + std::to_string(i));
    }
    o.detail = std::to_string(ok) + "/100 truth-table equivalent";
    return o;
}

Outcome simulation_bound() {
    Outcome o;
    std::mt19937 rng(31337);
    SimulateOptions opt;
    opt.state_cap = 1'000'000;
    int checked = 0, largest = 0;
    for (int i = 0; i < 50; ++i) {
        const auto a = gen::random_alternating(rng, 4, 2);
        const int q = static_cast<int>(a.states.size()), f = static_cast<int>(a.accepting.size());
        long long expected = 1;
        for (int j = 0; j < f; ++j) expected *= 2;
        for (int j = 0; j < q - f; ++j) expected *= 3;
        expected += 1;
        o.expect(static_cast<long long>(sim_state_bound(q, f)) == expected, "bound formula");
        try {
            const auto n = simulate(a, opt);
            const int count = static_cast<int>(n.states.size());
            largest = std::max(largest, count);
            o.expect(count <= expected, "instance " + std::to_string(i) + ": " + std::to_string(count) + " states");
            ++checked;
        } catch (const ResourceLimit& e) {
            o.expect(false, "instance " + std::to_string(i) + " hit a cap: " + e.what());
        }
    }
    const auto spot = sim_state_bound(2, 1);
    o.expect(spot == 7, "spot value " + std::to_string(spot));
    o.detail = std::to_string(checked) + "/50 within bound (largest " + std::to_string(largest) +
               " states incl. accept-all), bound(2,1) = " + std::to_string(spot);
    return o;
}

Outcome simulation_correctness() {
    Outcome o;
    std::mt19937 rng(4711);
    const auto t0 = Clock::now();
    int agree = 0, nonempty = 0;
    for (int i = 0; i < 50; ++i) {
        const auto a = gen::random_nondet_shaped(rng, i % 2 == 1);
        const auto direct = direct_reading(a);
        if (!direct) {
            o.expect(false, "instance " + std::to_string(i) + " has no direct reading");
            continue;
        }
        const bool x = decide(simulate(a)).empty;
        const bool y = decide(*direct).empty;
        nonempty += !y;
        agree += x == y;
        o.expect(x == y, "instance " + std::to_string(i));
    }
    const double s = seconds_since(t0);
    o.expect(s < 60.0, "took " + fixed(s) + " s");
    o.detail = std::to_string(agree) + "/50 agree (" + std::to_string(nonempty) + " non-empty), " + fixed(s) + " s";
    return o;
}

Outcome classical_agreement() {
    Outcome o;
    std::mt19937 rng(1234);
    const auto t0 = Clock::now();
    int agree = 0, nonempty = 0;
    for (int i = 0; i < 100; ++i) {
        const auto a = gen::random_nondet(rng, 4, 2, false);
        const bool expect = oracle::classical_nonempty(a);
        nonempty += expect;
        const bool got = !decide(a).empty;
        agree += got == expect;
        o.expect(got == expect, "instance " + std::to_string(i));
    }
    const double s = seconds_since(t0);
    o.expect(s < 120.0, "took " + fixed(s) + " s");
    o.detail = std::to_string(agree) + "/100 agree (" + std::to_string(nonempty) + " non-empty), " + fixed(s) + " s";
    return o;
}

Outcome witness_validity() {
    Outcome o;
    WitnessTally t;
    for (const auto& p : corpus_files()) {
        const auto a = load_nondet(p);
        const auto d = decide(a);
        if (!d.empty) check_one_witness(a, *d.witness, o, t, p.filename().string());
    }
    std::mt19937 rng(8080);
    int limited = 0;
    for (int i = 0; i < 200; ++i) {
        const auto a = gen::random_nondet(rng, 4, 2, i % 2 == 0);
        try {
            const auto d = decide(a);
            if (!d.empty) check_one_witness(a, *d.witness, o, t, "random " + std::to_string(i));
        } catch (const ResourceLimit&) {
            ++limited;
        }
    }
    o.detail = std::to_string(t.witnesses) + " witnesses; bound factors clamped for " + std::to_string(t.bound_clamped) +
               "; depth 3*height clamped for " + std::to_string(t.clamped) + "; " + std::to_string(limited) +
               " random instances hit the node limit";
    return o;
}

Outcome csp_driven_emptiness() {
    Outcome o;
    const fs::path dir(STBUCHI_CORPUS_DIR);
    std::ostringstream detail;
    for (const char* name : {"contradictory.aut", "contradictory_local.aut"}) {
        const auto a = load_nondet(dir / name);
        const bool empty = decide(a).empty;
        o.expect(empty, std::string(name) + " not empty");
        detail << name << ": " << (empty ? "empty" : "not-empty");
        // drop each constraint of the single transition in turn
        std::vector<std::string> flips;
        const auto& cs = a.delta[0][0].constraints;
        for (const auto& c : cs) {
            NondetAutomaton b = a;
            auto& t = b.delta[0][0];
            t.constraints.erase(c);
            const bool e = decide(b).empty;
            flips.push_back(std::string(atom_name(c.rel.atoms().front())) + (e ? " dropped: empty" : " dropped: not-empty"));
        }
        bool any = false;
        for (const auto& f : flips) {
            detail << "; " << f;
            any = any || f.find("not-empty") != std::string::npos;
        }
        o.expect(any, std::string(name) + ": no removal flips the verdict");
        detail << " | ";
    }
    const auto relaxed = load_nondet(dir / "contradictory_relaxed.aut");
    const bool e = decide(relaxed).empty;
    o.expect(!e, "contradictory_relaxed.aut empty");
    detail << "contradictory_relaxed.aut: " << (e ? "empty" : "not-empty");
    o.detail = detail.str();
    return o;
}

Outcome node_bounds() {
    Outcome o;
    int witnesses = 0;
    long long worst_internal = 0, worst_bound = 0;
    for (const auto& p : corpus_files()) {
        const auto a = load_nondet(p);
        const auto d = decide(a);
        if (d.empty) continue;
        ++witnesses;
        const long long ib = independent_internal_bound(a);
        const auto& m = *d.witness;
        const int internal = m.internal_count(), leaves = m.leaf_count();
        o.expect(internal <= ib, p.filename().string() + ": internal over bound");
        o.expect(leaves <= ib * a.sig.k(), p.filename().string() + ": leaves over bound");
        if (internal * worst_bound >= worst_internal * ib) {
            worst_internal = internal;
            worst_bound = ib;
        }
    }
    o.detail = std::to_string(witnesses) + " corpus witnesses; tightest " + std::to_string(worst_internal) + " <= " +
               std::to_string(worst_bound);
    return o;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + STBUCHI_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    Outcome o;
    const fs::path tmp = fs::temp_directory_path() / ("stbuchi-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    int files = 0;
    for (const auto& p : corpus_files()) {
        const fs::path w1 = tmp / "a.json", w2 = tmp / "b.json";
        fs::remove(w1);
        fs::remove(w2);
        const int c1 = run_cli("emptiness \"" + p.string() + "\" --witness \"" + w1.string() + "\"");
        const int c2 = run_cli("emptiness \"" + p.string() + "\" --witness \"" + w2.string() + "\"");
        const std::string tag = p.filename().string();
        o.expect(c1 == c2, tag + ": exit codes " + std::to_string(c1) + " vs " + std::to_string(c2));
        o.expect(c1 == 0 || c1 == 1, tag + ": exit code " + std::to_string(c1));
        o.expect(fs::exists(w1) == fs::exists(w2), tag + ": witness written once");
        if (fs::exists(w1) && fs::exists(w2)) o.expect(read_file(w1) == read_file(w2), tag + ": witness bytes differ");
        ++files;
    }
    fs::remove_all(tmp);
    o.detail = std::to_string(files) + " corpus files, two CLI runs each";
    return o;
}

Outcome performance() {
    Outcome o;
    double worst = 0;
    std::string worst_name;
    for (const auto& p : corpus_files()) {
        const auto t0 = Clock::now();
        const auto a = load_nondet(p);
        decide(a);
        const double s = seconds_since(t0);
        o.expect(s < 10.0, p.filename().string() + ": " + fixed(s) + " s");
        if (s >= worst) {
            worst = s;
            worst_name = p.filename().string();
        }
    }
    o.detail = "slowest " + worst_name + " at " + fixed(worst, 3) + " s";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"algebra integrity", algebra_integrity},
        {"path-consistency adequacy", path_consistency_adequacy},
        {"DNF equivalence", dnf_equivalence},
        {"simulation bound", simulation_bound},
        {"simulation correctness proxy", simulation_correctness},
        {"emptiness vs classical oracle", classical_agreement},
        {"witness validity", witness_validity},
        {"CSP-driven emptiness", csp_driven_emptiness},
        {"node-bound conformance", node_bounds},
        {"determinism", determinism},
        {"desk-scale performance", performance},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.problems.push_back(std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail;
        for (const auto& p : o.problems) std::cout << " [" << p << "]";
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
