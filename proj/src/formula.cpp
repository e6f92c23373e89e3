#include "stbuchi/formula.hpp"

#include <algorithm>
#include <string>

namespace stbuchi {

namespace {

void minimize(std::vector<Disjunct>& ds) {
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    // Keep only subset-minimal sets; smaller sets are checked first.
    std::vector<std::size_t> order(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ds[a].size() < ds[b].size(); });
    std::vector<char> keep(ds.size(), 1);
    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        for (std::size_t k : kept) {
            if (ds[k].size() < ds[idx].size() &&
                std::includes(ds[idx].begin(), ds[idx].end(), ds[k].begin(), ds[k].end())) {
                keep[idx] = 0;
                break;
            }
        }
        if (keep[idx]) kept.push_back(idx);
    }
    std::vector<Disjunct> out;
    out.reserve(kept.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (keep[i]) out.push_back(std::move(ds[i]));
    ds = std::move(out);
}

void check_cap(std::size_t count, std::size_t cap) {
    if (count > cap)
        throw ResourceLimit("DNF expansion exceeds " + std::to_string(cap) + " disjuncts");
}

}  // namespace

std::vector<Disjunct> dnf(const Formula& f, std::size_t cap) {
    switch (f.kind) {
        case Formula::Kind::Leaf:
            return {Disjunct{f.leaf}};
        case Formula::Kind::Or: {
            std::vector<Disjunct> out;
            for (const auto& c : f.children) {
                auto part = dnf(c, cap);
                out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
                check_cap(out.size(), cap);
            }
            minimize(out);
            return out;
        }
        case Formula::Kind::And: {
            std::vector<Disjunct> acc{Disjunct{}};
            for (const auto& c : f.children) {
                auto part = dnf(c, cap);
                check_cap(acc.size() * part.size(), cap);
                std::vector<Disjunct> next;
                next.reserve(acc.size() * part.size());
                for (const auto& a : acc) {
                    for (const auto& b : part) {
                        Disjunct merged = a;
                        merged.insert(b.begin(), b.end());
                        next.push_back(std::move(merged));
                    }
                }
                minimize(next);
                acc = std::move(next);
            }
            return acc;
        }
    }
    return {};
}

bool literals_admissible(const std::set<Literal>& literals) {
    for (const auto& l : literals)
        if (!l.negated && literals.count(l.complement())) return false;
    return true;
}

Partition partition(const Disjunct& d) {
    Partition p;
    for (const auto& g : d) {
        if (auto* l = std::get_if<Literal>(&g)) {
            p.literals.insert(*l);
        } else if (auto* c = std::get_if<SpatialConstraint>(&g)) {
            p.constraints.insert(*c);
        } else {
            const auto& m = std::get<Move>(g);
            p.moves[m.direction].insert(m.state);
        }
    }
    if (!literals_admissible(p.literals))
        throw InadmissibleDisjunct("disjunct contains a literal and its complement");
    return p;
}

bool evaluate(const Formula& f, const std::function<bool(const Generator&)>& value) {
    switch (f.kind) {
        case Formula::Kind::Leaf:
            return value(f.leaf);
        case Formula::Kind::And:
            return std::all_of(f.children.begin(), f.children.end(),
                               [&](const Formula& c) { return evaluate(c, value); });
        case Formula::Kind::Or:
            return std::any_of(f.children.begin(), f.children.end(),
                               [&](const Formula& c) { return evaluate(c, value); });
    }
    return false;
}

Formula from_dnf(const std::vector<Disjunct>& ds) {
    std::vector<Formula> terms;
    for (const auto& d : ds) {
        std::vector<Formula> atoms;
        for (const auto& g : d) atoms.push_back(Formula::atom(g));
        terms.push_back(Formula::conj(std::move(atoms)));
    }
    return Formula::disj(std::move(terms));
}

std::set<Generator> generators(const Formula& f) {
    std::set<Generator> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.kind == Formula::Kind::Leaf) out.insert(g.leaf);
        for (const auto& c : g.children) walk(c);
    };
    walk(f);
    return out;
}

}  // namespace stbuchi
