#include "stbuchi/simulate.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace stbuchi {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

constexpr int kPendingAcceptAll = -1;

struct Choice {
    std::set<Literal> literals;
    std::set<SpatialConstraint> constraints;
    std::map<int, std::map<int, std::vector<int>>> contributors;  // dir -> q' -> tags of contributors
};

}  // namespace

std::uint64_t sim_state_bound(int size_q, int size_f) {
    if (size_f < 0 || size_f > size_q) throw std::invalid_argument("sim_state_bound: need 0 <= |F| <= |Q|");
    std::uint64_t r = 1;
    for (int i = 0; i < size_f; ++i) r = saturating_mul(r, 2);
    for (int i = size_f; i < size_q; ++i) r = saturating_mul(r, 3);
    return r == std::numeric_limits<std::uint64_t>::max() ? r : r + 1;
}

std::string format_sim_state(const std::vector<std::string>& names, const SimState& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += names[static_cast<std::size_t>(s[i].first)] + ":" + std::to_string(s[i].second);
    }
    return out + "]";
}

std::optional<SimState> parse_sim_state(const std::vector<std::string>& names, const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') return std::nullopt;
    SimState out;
    const std::string body = text.substr(1, text.size() - 2);
    std::size_t start = 0;
    while (start < body.size()) {
        auto comma = body.find(',', start);
        if (comma == std::string::npos) comma = body.size();
        const std::string tok = body.substr(start, comma - start);
        const auto colon = tok.rfind(':');
        if (colon == std::string::npos) return std::nullopt;
        auto it = std::find(names.begin(), names.end(), tok.substr(0, colon));
        const std::string tag = tok.substr(colon + 1);
        if (it == names.end() || (tag != "0" && tag != "1")) return std::nullopt;
        out.emplace_back(static_cast<int>(it - names.begin()), tag == "1");
        start = comma + 1;
    }
    if (out.empty() || !std::is_sorted(out.begin(), out.end())) return std::nullopt;
    return out;
}

NondetAutomaton simulate(const AlternatingAutomaton& a, const SimulateOptions& options) {
    const int k = a.sig.k();
    std::vector<std::vector<Disjunct>> disjuncts;
    disjuncts.reserve(a.delta.size());
    for (const auto& f : a.delta) disjuncts.push_back(dnf(f, options.dnf_cap));

    auto in_f = [&](int q) { return a.accepting.count(q) != 0; };

    std::map<SimState, int> index;
    std::vector<SimState> order;
    std::vector<std::vector<Transition>> delta;
    std::deque<int> work;

    auto intern = [&](SimState s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(order.size()));
        if (fresh) {
            if (order.size() >= options.state_cap)
                throw ResourceLimit("simulation exceeds " + std::to_string(options.state_cap) + " states");
            for (const auto& [q, tag] : s)
                if (in_f(q) && tag != 1) throw std::logic_error("accepting state with tag 0");
            order.push_back(std::move(s));
            delta.emplace_back();
            work.push_back(it->second);
        }
        return it->second;
    };

    intern(SimState{{a.initial, in_f(a.initial) ? 1 : 0}});

    while (!work.empty()) {
        const int id = work.front();
        work.pop_front();
        const SimState e = order[static_cast<std::size_t>(id)];
        const bool breakpoint = std::all_of(e.begin(), e.end(), [](const auto& p) { return p.second == 1; });

        // Mixed-radix counter over one disjunct per state of e.
        std::vector<std::size_t> pick(e.size(), 0);
        bool any = true;
        for (const auto& [q, tag] : e) any = any && !disjuncts[static_cast<std::size_t>(q)].empty();
        std::set<Transition> out;
        std::size_t enumerated = 0;
        while (any) {
            if (++enumerated > options.choice_cap)
                throw ResourceLimit("more than " + std::to_string(options.choice_cap) + " choice functions at " +
                                    format_sim_state(a.states, e));
            Choice c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                const auto [q, tag] = e[i];
                for (const auto& g : disjuncts[static_cast<std::size_t>(q)][pick[i]]) {
                    if (auto* l = std::get_if<Literal>(&g)) c.literals.insert(*l);
                    else if (auto* x = std::get_if<SpatialConstraint>(&g)) c.constraints.insert(*x);
                    else {
                        const auto& m = std::get<Move>(g);
                        c.contributors[m.direction][m.state].push_back(tag);
                    }
                }
            }
            if (literals_admissible(c.literals)) {
                Transition t{std::move(c.literals), std::move(c.constraints), {}};
                for (int d = 0; d < k; ++d) {
                    auto it = c.contributors.find(d);
                    if (it == c.contributors.end()) {
                        t.succ.push_back(kPendingAcceptAll);
                        continue;
                    }
                    SimState next;
                    for (const auto& [q2, tags] : it->second) {
                        int tag;
                        if (breakpoint) tag = in_f(q2);
                        else tag = in_f(q2) || std::all_of(tags.begin(), tags.end(), [](int b) { return b == 1; });
                        next.emplace_back(q2, tag);
                    }
                    t.succ.push_back(intern(std::move(next)));
                }
                out.insert(std::move(t));
            }
            std::size_t i = 0;
            for (; i < e.size(); ++i) {
                if (++pick[i] < disjuncts[static_cast<std::size_t>(e[i].first)].size()) break;
                pick[i] = 0;
            }
            if (i == e.size()) break;
        }
        delta[static_cast<std::size_t>(id)].assign(out.begin(), out.end());
    }

    NondetAutomaton n;
    n.sig = a.sig;
    const int accept_all = static_cast<int>(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        n.states.push_back(format_sim_state(a.states, order[i]));
        if (std::all_of(order[i].begin(), order[i].end(), [](const auto& p) { return p.second == 1; }))
            n.accepting.insert(static_cast<int>(i));
    }
    n.states.push_back(kAcceptAllName);
    n.accepting.insert(accept_all);
    n.accept_all = accept_all;
    n.initial = 0;
    for (auto& ts : delta) {
        for (auto& t : ts)
            for (int& s : t.succ)
                if (s == kPendingAcceptAll) s = accept_all;
        std::sort(ts.begin(), ts.end());
    }
    delta.push_back({Transition{{}, {}, std::vector<int>(static_cast<std::size_t>(k), accept_all)}});
    n.delta = std::move(delta);
    return n;
}

std::optional<NondetAutomaton> direct_reading(const AlternatingAutomaton& a, std::size_t dnf_cap) {
    NondetAutomaton n;
    n.sig = a.sig;
    n.states = a.states;
    n.initial = a.initial;
    n.accepting = a.accepting;
    for (const auto& f : a.delta) {
        std::vector<Transition> ts;
        for (const auto& d : dnf(f, dnf_cap)) {
            Transition t;
            std::map<int, std::set<int>> moves;
            for (const auto& g : d) {
                if (auto* l = std::get_if<Literal>(&g)) t.literals.insert(*l);
                else if (auto* x = std::get_if<SpatialConstraint>(&g)) t.constraints.insert(*x);
                else moves[std::get<Move>(g).direction].insert(std::get<Move>(g).state);
            }
            if (static_cast<int>(moves.size()) != a.sig.k()) return std::nullopt;
            for (const auto& [dir, qs] : moves) {
                if (qs.size() != 1) return std::nullopt;
                t.succ.push_back(*qs.begin());
            }
            if (literals_admissible(t.literals)) ts.push_back(std::move(t));
        }
        std::sort(ts.begin(), ts.end());
        n.delta.push_back(std::move(ts));
    }
    return n;
}

}  // namespace stbuchi
