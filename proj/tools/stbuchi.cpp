// stbuchi: validate, simulate and decide emptiness of spatially constrained
// Büchi tree automata.
//
// Exit codes: 0 ok / not-empty, 1 defects / empty / witness rejected, 2 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stbuchi/dsl.hpp"
#include "stbuchi/emptiness.hpp"
#include "stbuchi/errors.hpp"
#include "stbuchi/io.hpp"
#include "stbuchi/simulate.hpp"

using namespace stbuchi;

namespace {

constexpr int kExitError = 2;

struct Failure {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{"cannot write " + path};
}

std::size_t env_size(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (*end != '\0' || x == 0) throw Failure{std::string(name) + " must be a positive integer"};
    return static_cast<std::size_t>(x);
}

SimulateOptions sim_options() {
    SimulateOptions o;
    o.dnf_cap = env_size("STBUCHI_MAX_DNF", kDefaultDnfCap);
    o.choice_cap = o.dnf_cap;
    o.state_cap = env_size("STBUCHI_MAX_STATES", kDefaultStateCap);
    return o;
}

SearchOptions search_options(int max_nodes) {
    SearchOptions o;
    o.node_factor = static_cast<int>(env_size("STBUCHI_NODE_FACTOR", kDefaultNodeFactor));
    if (max_nodes > 0) o.max_nodes = max_nodes;
    return o;
}

AutomatonDocument load_document(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_document(text);
    } catch (const SyntaxError& e) {
        throw Failure{path + ":" + e.what()};
    }
}

std::vector<Defect> report_defects(const std::string& path, const std::vector<Defect>& ds) {
    for (const auto& d : ds) std::cerr << path << ": " << d.location << ": " << d.message << "\n";
    return ds;
}

Automaton load(const std::string& path) {
    const Resolution r = resolve(load_document(path));
    if (!r.automaton) {
        report_defects(path, r.defects);
        throw Failure{path + ": " + std::to_string(r.defects.size()) + " defect(s)"};
    }
    return *r.automaton;
}

/// Alternating inputs are decided through their simulation.
NondetAutomaton load_nondet(const std::string& path) {
    Automaton a = load(path);
    if (auto* n = std::get_if<NondetAutomaton>(&a)) return *n;
    return simulate(std::get<AlternatingAutomaton>(a), sim_options());
}

int cmd_validate(const std::string& path) {
    const Resolution r = resolve(load_document(path));
    if (r.defects.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& d : r.defects) std::cout << d.location << ": " << d.message << "\n";
    return 1;
}

int cmd_simulate(const std::string& path, const std::string& out) {
    Automaton a = load(path);
    auto* alt = std::get_if<AlternatingAutomaton>(&a);
    if (!alt) throw Failure{path + ": simulate needs an alternating automaton"};
    const NondetAutomaton n = simulate(*alt, sim_options());
    write_file(out, print_document(to_document(n)));
    std::cout << "states: " << n.states.size() << "\n"
              << "bound: " << sim_state_bound(static_cast<int>(alt->states.size()), static_cast<int>(alt->accepting.size()))
              << "\n";
    return 0;
}

int cmd_emptiness(const std::string& path, const std::string& witness, const std::string& dot, int depth, int max_nodes,
                  bool verbose) {
    const NondetAutomaton a = load_nondet(path);
    DecideOptions o;
    o.search = search_options(max_nodes);
    if (depth >= 0) o.unfold_depth = depth;
    const Decision d = decide(a, o);
    for (const auto& msg : d.diagnostics) std::cerr << "note: " << msg << "\n";
    if (verbose)
        std::cerr << "steps " << d.stats.steps << ", backtracks " << d.stats.backtracks << ", network checks "
                  << d.stats.csp_checks << ", node limit " << d.stats.node_limit << "\n";
    if (d.empty) {
        std::cout << "empty\n";
        return 1;
    }
    if (!witness.empty()) write_file(witness, witness_to_json(a, *d.witness));
    if (!dot.empty()) write_file(dot, witness_to_dot(a, *d.witness));
    std::cout << "not-empty\n";
    return 0;
}

int cmd_check_witness(const std::string& path, const std::string& witness, int depth) {
    const NondetAutomaton a = load_nondet(path);
    FiniteTreeModel m;
    try {
        m = witness_from_json(a, read_file(witness));
    } catch (const MalformedModel& e) {
        std::cout << "malformed: " << e.what() << "\n";
        return 1;
    }
    WitnessCheckOptions o;
    if (depth >= 0) o.unfold_depths = {depth};
    const WitnessReport r = check_witness(a, m, o);
    for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
    std::cerr << "internal " << r.bounds.internal << " <= " << r.bounds.internal_bound << ", leaves " << r.bounds.leaves
              << " <= " << r.bounds.leaf_bound << "\n";
    for (const auto& f : r.failures) std::cout << f << "\n";
    if (!r.ok()) return 1;
    std::cout << "ok\n";
    return 0;
}

int cmd_unfold(const std::string& path, const std::string& witness, int depth, const std::string& out,
               const std::string& scene_out) {
    const NondetAutomaton a = load_nondet(path);
    FiniteTreeModel m;
    try {
        m = witness_from_json(a, read_file(witness));
    } catch (const MalformedModel& e) {
        throw Failure{witness + ": " + e.what()};
    }
    const int clamped = clamp_unfold_depth(m.k, depth);
    if (clamped != depth) std::cerr << "note: depth clamped to " << clamped << "\n";
    write_file(out, run_prefix_to_json(a, unfold(m, clamped)));
    if (!scene_out.empty()) {
        auto scene = compatible_scene(a, m, clamped);
        if (!scene) throw Failure{"witness network is inconsistent"};
        write_file(scene_out, scene_to_json(a.sig, *scene));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Büchi tree automata with RCC8 constraints"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stbuchi 1.0");

    std::string file, out, witness, dot, scene;
    int depth = -1;
    int max_nodes = 0;
    bool verbose = false;

    auto* validate_cmd = app.add_subcommand("validate", "report defects of an automaton file");
    validate_cmd->add_option("FILE", file, "automaton (.aut)")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "translate an alternating automaton to a nondet one");
    simulate_cmd->add_option("FILE", file, "alternating automaton (.aut)")->required();
    simulate_cmd->add_option("-o,--output", out, "output .aut")->required();

    auto* empty_cmd = app.add_subcommand("emptiness", "decide emptiness; prints not-empty or empty");
    empty_cmd->add_option("FILE", file, "automaton (.aut)")->required();
    empty_cmd->add_option("--witness", witness, "write the witness as JSON");
    empty_cmd->add_option("--dot", dot, "write the witness as DOT");
    empty_cmd->add_option("--unfold-depth", depth, "depth of the unfolding post-check (default 3*height)")
        ->check(CLI::NonNegativeNumber);
    empty_cmd->add_option("--max-nodes", max_nodes, "internal node limit for the search")->check(CLI::PositiveNumber);
    empty_cmd->add_flag("-v,--verbose", verbose, "search statistics on stderr");

    auto* check_cmd = app.add_subcommand("check-witness", "re-validate a stored witness");
    check_cmd->add_option("FILE", file, "automaton (.aut)")->required();
    check_cmd->add_option("WITNESS", witness, "witness (.json)")->required();
    check_cmd->add_option("--unfold-depth", depth, "single unfolding depth (default 1, 2, 3*height)")
        ->check(CLI::NonNegativeNumber);

    auto* unfold_cmd = app.add_subcommand("unfold", "write a run prefix unfolded from a witness");
    unfold_cmd->add_option("FILE", file, "automaton (.aut)")->required();
    unfold_cmd->add_option("WITNESS", witness, "witness (.json)")->required();
    unfold_cmd->add_option("--depth", depth, "prefix depth")->required()->check(CLI::NonNegativeNumber);
    unfold_cmd->add_option("-o,--output", out, "run prefix (.json)")->required();
    unfold_cmd->add_option("--scene", scene, "also write a compatible scene (.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*validate_cmd) return cmd_validate(file);
        if (*simulate_cmd) return cmd_simulate(file, out);
        if (*empty_cmd) return cmd_emptiness(file, witness, dot, depth, max_nodes, verbose);
        if (*check_cmd) return cmd_check_witness(file, witness, depth);
        if (*unfold_cmd) return cmd_unfold(file, witness, depth, out, scene);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const ResourceLimit& e) {
        std::cerr << "error: resource limit: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}
