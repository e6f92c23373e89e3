#pragma once

// RCC8 relation algebra and qualitative constraint networks.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stbuchi {

enum class Atom : std::uint8_t { DC, EC, PO, TPP, NTPP, TPPI, NTPPI, EQ };

inline constexpr int kAtomCount = 8;
inline constexpr std::array<Atom, kAtomCount> kAllAtoms = {
    Atom::DC, Atom::EC, Atom::PO, Atom::TPP, Atom::NTPP, Atom::TPPI, Atom::NTPPI, Atom::EQ};

std::string_view atom_name(Atom a);
/// Case-insensitive lookup; returns nullopt for unknown names.
std::optional<Atom> atom_from_name(std::string_view name);

/// A set of RCC8 atoms, stored as an 8-bit mask.
class Relation {
public:
    constexpr Relation() = default;
    constexpr explicit Relation(std::uint8_t bits) : bits_(bits) {}
    constexpr Relation(Atom a) : bits_(static_cast<std::uint8_t>(1u << static_cast<int>(a))) {}
    Relation(std::initializer_list<Atom> atoms) {
        for (Atom a : atoms) bits_ |= Relation(a).bits_;
    }

    static constexpr Relation full() { return Relation(0xFF); }
    static constexpr Relation empty() { return Relation(0); }

    constexpr std::uint8_t bits() const { return bits_; }
    constexpr bool is_empty() const { return bits_ == 0; }
    constexpr bool is_full() const { return bits_ == 0xFF; }
    constexpr bool contains(Atom a) const { return (bits_ & Relation(a).bits_) != 0; }
    int size() const;
    bool is_atomic() const { return size() == 1; }
    std::vector<Atom> atoms() const;

    constexpr Relation operator&(Relation o) const { return Relation(bits_ & o.bits_); }
    constexpr Relation operator|(Relation o) const { return Relation(bits_ | o.bits_); }
    constexpr Relation& operator&=(Relation o) { bits_ &= o.bits_; return *this; }
    constexpr Relation& operator|=(Relation o) { bits_ |= o.bits_; return *this; }
    constexpr bool subset_of(Relation o) const { return (bits_ & ~o.bits_) == 0; }

    friend constexpr auto operator<=>(Relation, Relation) = default;

private:
    std::uint8_t bits_ = 0;
};

Relation converse(Relation r);
Relation compose(Relation r, Relation s);
/// Set complement with respect to the full relation.
Relation complement(Relation r);

/// Canonical text: a bare atom name for singletons, `{A,B}` otherwise (`{}` when empty).
std::string to_string(Relation r);
/// Accepts `TPP`, `tpp`, `{TPP,NTPP}`, `{}`; nullopt on malformed input.
std::optional<Relation> relation_from_string(std::string_view text);

/// Qualitative constraint network over named variables.
///
/// Variables are opaque string tokens, indexed in insertion order. Pairs that
/// were never constrained carry the full relation; the diagonal carries EQ.
/// Every stored edge is kept converse-closed.
class Qcsp {
public:
    Qcsp() = default;

    /// Returns the index of `name`, adding it if it is new.
    int add_variable(const std::string& name);
    std::optional<int> find(const std::string& name) const;
    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }

    Relation at(int i, int j) const { return edges_[index(i, j)]; }
    /// Intersects edge (i,j) with r and (j,i) with converse(r).
    void constrain(int i, int j, Relation r);
    void constrain(const std::string& a, const std::string& b, Relation r);
    /// Overwrites edge (i,j) and its converse.
    void set(int i, int j, Relation r);

    bool has_empty_edge() const;
    bool is_atomic() const;
    /// Number of unordered pairs i<j whose edge is not full.
    int constrained_pairs() const;

    /// Same variables and edges, regardless of insertion order.
    bool equivalent(const Qcsp& other) const;
    friend bool operator==(const Qcsp& a, const Qcsp& b);

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * stride_ + static_cast<std::size_t>(j);
    }

    std::vector<std::string> names_;
    std::map<std::string, int> lookup_;
    std::vector<Relation> edges_;
    std::size_t stride_ = 0;
};

/// Greatest fixpoint of C(i,j) <- C(i,j) & C(i,k);C(k,j). Returns nullopt when
/// some edge becomes empty.
std::optional<Qcsp> path_consistency(const Qcsp& n);

/// Decides consistency: backtracking over atomic refinements, pruned by path
/// consistency, with edges visited in index order. Independent components are
/// solved separately.
bool is_consistent(const Qcsp& n);

/// Like is_consistent, but returns the witnessing refinement: path-consistent,
/// atomic on every constrained pair.
std::optional<Qcsp> solve(const Qcsp& n);

}  // namespace stbuchi
