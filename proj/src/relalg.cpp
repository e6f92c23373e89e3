#include "stbuchi/relalg.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <numeric>

namespace stbuchi {

namespace {

using A = Atom;

// Standard RCC8 composition table; row = R(a,b), column = S(b,c), entry = R;S(a,c).
// Atom order: DC EC PO TPP NTPP TPPI NTPPI EQ.
using Table = std::array<std::array<Relation, kAtomCount>, kAtomCount>;

const Table& composition_table() {
    static const Table table = {{
    // DC
    {{Relation::full(),
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::DC},
      {A::DC},
      {A::DC}}},
    // EC
    {{{A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::DC, A::EC, A::PO, A::TPP, A::TPPI, A::EQ},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::EC, A::PO, A::TPP, A::NTPP},
      {A::PO, A::TPP, A::NTPP},
      {A::DC, A::EC},
      {A::DC},
      {A::EC}}},
    // PO
    {{{A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      Relation::full(),
      {A::PO, A::TPP, A::NTPP},
      {A::PO, A::TPP, A::NTPP},
      {A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::PO}}},
    // TPP
    {{{A::DC},
      {A::DC, A::EC},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::TPP, A::NTPP},
      {A::NTPP},
      {A::DC, A::EC, A::PO, A::TPP, A::TPPI, A::EQ},
      {A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::TPP}}},
    // NTPP
    {{{A::DC},
      {A::DC},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      {A::NTPP},
      {A::NTPP},
      {A::DC, A::EC, A::PO, A::TPP, A::NTPP},
      Relation::full(),
      {A::NTPP}}},
    // TPPI
    {{{A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPP, A::TPPI, A::EQ},
      {A::PO, A::TPP, A::NTPP},
      {A::TPPI, A::NTPPI},
      {A::NTPPI},
      {A::TPPI}}},
    // NTPPI
    {{{A::DC, A::EC, A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPPI, A::NTPPI},
      {A::PO, A::TPP, A::NTPP, A::TPPI, A::NTPPI, A::EQ},
      {A::NTPPI},
      {A::NTPPI},
      {A::NTPPI}}},
    // EQ
    {{{A::DC}, {A::EC}, {A::PO}, {A::TPP}, {A::NTPP}, {A::TPPI}, {A::NTPPI}, {A::EQ}}},
    }};
    return table;
}

constexpr std::array<Atom, kAtomCount> kConverse = {
    A::DC, A::EC, A::PO, A::TPPI, A::NTPPI, A::TPP, A::NTPP, A::EQ};

constexpr std::array<std::string_view, kAtomCount> kNames = {
    "DC", "EC", "PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ"};

struct Tables {
    std::array<std::uint8_t, 256> conv{};
    std::vector<std::uint8_t> comp = std::vector<std::uint8_t>(256 * 256);

    Tables() {
        const Table& table = composition_table();
        for (int r = 0; r < 256; ++r) {
            std::uint8_t out = 0;
            for (int a = 0; a < kAtomCount; ++a)
                if (r & (1 << a)) out |= Relation(kConverse[static_cast<std::size_t>(a)]).bits();
            conv[static_cast<std::size_t>(r)] = out;
        }
        for (int r = 0; r < 256; ++r) {
            for (int s = 0; s < 256; ++s) {
                std::uint8_t out = 0;
                for (int a = 0; a < kAtomCount; ++a) {
                    if (!(r & (1 << a))) continue;
                    for (int b = 0; b < kAtomCount; ++b)
                        if (s & (1 << b))
                            out |= table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].bits();
                }
                comp[static_cast<std::size_t>(r * 256 + s)] = out;
            }
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

std::string_view atom_name(Atom a) { return kNames[static_cast<std::size_t>(a)]; }

std::optional<Atom> atom_from_name(std::string_view name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (int i = 0; i < kAtomCount; ++i)
        if (kNames[static_cast<std::size_t>(i)] == upper) return static_cast<Atom>(i);
    return std::nullopt;
}

int Relation::size() const { return std::popcount(bits_); }

std::vector<Atom> Relation::atoms() const {
    std::vector<Atom> out;
    for (Atom a : kAllAtoms)
        if (contains(a)) out.push_back(a);
    return out;
}

Relation converse(Relation r) { return Relation(tables().conv[r.bits()]); }

Relation compose(Relation r, Relation s) {
    return Relation(tables().comp[static_cast<std::size_t>(r.bits()) * 256 + s.bits()]);
}

Relation complement(Relation r) { return Relation(static_cast<std::uint8_t>(~r.bits())); }

std::string to_string(Relation r) {
    if (r.is_atomic()) return std::string(atom_name(r.atoms().front()));
    std::string out = "{";
    bool first = true;
    for (Atom a : r.atoms()) {
        if (!first) out += ",";
        out += atom_name(a);
        first = false;
    }
    return out + "}";
}

std::optional<Relation> relation_from_string(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() != '{') {
        auto a = atom_from_name(text);
        if (!a) return std::nullopt;
        return Relation(*a);
    }
    if (text.back() != '}') return std::nullopt;
    text = trim(text.substr(1, text.size() - 2));
    Relation out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto piece = trim(text.substr(0, comma));
        auto a = atom_from_name(piece);
        if (!a) return std::nullopt;
        out |= *a;
        if (comma == std::string_view::npos) break;
        text = trim(text.substr(comma + 1));
        if (text.empty()) return std::nullopt;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Qcsp

int Qcsp::add_variable(const std::string& name) {
    if (auto it = lookup_.find(name); it != lookup_.end()) return it->second;
    const std::size_t n = names_.size();
    if (n == stride_) {
        const std::size_t cap = std::max<std::size_t>(8, stride_ * 2);
        std::vector<Relation> grown(cap * cap, Relation::full());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) grown[i * cap + j] = edges_[i * stride_ + j];
        edges_ = std::move(grown);
        stride_ = cap;
    }
    names_.push_back(name);
    lookup_.emplace(name, static_cast<int>(n));
    edges_[n * stride_ + n] = Atom::EQ;
    return static_cast<int>(n);
}

std::optional<int> Qcsp::find(const std::string& name) const {
    if (auto it = lookup_.find(name); it != lookup_.end()) return it->second;
    return std::nullopt;
}

void Qcsp::constrain(int i, int j, Relation r) {
    edges_[index(i, j)] &= r;
    edges_[index(j, i)] &= converse(r);
}

void Qcsp::constrain(const std::string& a, const std::string& b, Relation r) {
    const int i = add_variable(a);
    const int j = add_variable(b);
    constrain(i, j, r);
}

void Qcsp::set(int i, int j, Relation r) {
    edges_[index(i, j)] = r;
    edges_[index(j, i)] = converse(r);
}

bool Qcsp::has_empty_edge() const {
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (at(i, j).is_empty()) return true;
    return false;
}

bool Qcsp::is_atomic() const {
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (!at(i, j).is_atomic()) return false;
    return true;
}

bool operator==(const Qcsp& a, const Qcsp& b) {
    if (a.names_ != b.names_) return false;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j)
            if (a.at(i, j) != b.at(i, j)) return false;
    return true;
}

int Qcsp::constrained_pairs() const {
    int count = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (!at(i, j).is_full()) ++count;
    return count;
}

bool Qcsp::equivalent(const Qcsp& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i) {
        auto oi = other.find(name(i));
        if (!oi) return false;
        for (int j = 0; j < size(); ++j) {
            auto oj = other.find(name(j));
            if (!oj || at(i, j) != other.at(*oi, *oj)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Solving

std::optional<Qcsp> path_consistency(const Qcsp& input) {
    Qcsp n = input;
    if (n.has_empty_edge()) return std::nullopt;
    const int size = n.size();
    std::deque<std::pair<int, int>> queue;
    std::vector<char> queued(static_cast<std::size_t>(size * size), 0);
    auto push = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        auto& flag = queued[static_cast<std::size_t>(i * size + j)];
        if (!flag) {
            flag = 1;
            queue.emplace_back(i, j);
        }
    };
    for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j)
            if (!n.at(i, j).is_full()) push(i, j);

    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        queued[static_cast<std::size_t>(i * size + j)] = 0;
        const Relation rij = n.at(i, j);
        for (int k = 0; k < size; ++k) {
            if (k == i || k == j) continue;
            // (i,k) via j
            Relation ik = n.at(i, k);
            Relation tightened = ik & compose(rij, n.at(j, k));
            if (tightened != ik) {
                if (tightened.is_empty()) return std::nullopt;
                n.set(i, k, tightened);
                push(i, k);
            }
            // (k,j) via i
            Relation kj = n.at(k, j);
            tightened = kj & compose(n.at(k, i), rij);
            if (tightened != kj) {
                if (tightened.is_empty()) return std::nullopt;
                n.set(k, j, tightened);
                push(k, j);
            }
        }
    }
    return n;
}

namespace {

// Atomic and universal relations both lie in a tractable class for which path
// consistency decides consistency, so only edges that are neither need splitting.
bool refine(Qcsp& n) {
    auto closed = path_consistency(n);
    if (!closed) return false;
    n = std::move(*closed);
    for (int i = 0; i < n.size(); ++i) {
        for (int j = i + 1; j < n.size(); ++j) {
            const Relation r = n.at(i, j);
            if (r.is_atomic() || r.is_full()) continue;
            for (Atom a : r.atoms()) {
                Qcsp branch = n;
                branch.set(i, j, a);
                if (refine(branch)) {
                    n = std::move(branch);
                    return true;
                }
            }
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> components(const Qcsp& n) {
    std::vector<int> parent(static_cast<std::size_t>(n.size()));
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int i = 0; i < n.size(); ++i)
        for (int j = i + 1; j < n.size(); ++j)
            if (!n.at(i, j).is_full()) parent[static_cast<std::size_t>(root(i))] = root(j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n.size(); ++i) groups[root(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [r, members] : groups) out.push_back(std::move(members));
    return out;
}

}  // namespace

std::optional<Qcsp> solve(const Qcsp& n) {
    for (int i = 0; i < n.size(); ++i)
        if (n.at(i, i).is_empty()) return std::nullopt;
    Qcsp result = n;
    for (const auto& members : components(n)) {
        if (members.size() < 2) continue;
        Qcsp part;
        for (int v : members) part.add_variable(n.name(v));
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = 0; b < members.size(); ++b)
                if (a != b) part.set(static_cast<int>(a), static_cast<int>(b), n.at(members[a], members[b]));
        if (!refine(part)) return std::nullopt;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                result.set(members[a], members[b], part.at(static_cast<int>(a), static_cast<int>(b)));
    }
    return result;
}

bool is_consistent(const Qcsp& n) { return solve(n).has_value(); }

}  // namespace stbuchi
