#pragma once

// Alternating -> nondeterministic translation by 0/1 tagging of states.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stbuchi/automata.hpp"

namespace stbuchi {

/// (state, tag) pairs sorted by state, at most one per state.
using SimState = std::vector<std::pair<int, int>>;

inline constexpr std::size_t kDefaultStateCap = 100'000;
inline constexpr const char* kAcceptAllName = "#";

struct SimulateOptions {
    std::size_t dnf_cap = kDefaultDnfCap;
    std::size_t state_cap = kDefaultStateCap;
    /// Cap on choice functions enumerated per simulated state.
    std::size_t choice_cap = kDefaultDnfCap;
};

/// 2^f * 3^(q-f) + 1, saturating at UINT64_MAX.
std::uint64_t sim_state_bound(int size_q, int size_f);

/// `[q0:1,q1:0]`
std::string format_sim_state(const std::vector<std::string>& names, const SimState& s);
/// Inverse of format_sim_state against the given state names.
std::optional<SimState> parse_sim_state(const std::vector<std::string>& names, const std::string& text);

/// Reachable part of the tagged construction. States are named by
/// format_sim_state in discovery order, followed by the accept-all state "#".
/// Throws ResourceLimit when a cap is exceeded.
NondetAutomaton simulate(const AlternatingAutomaton& a, const SimulateOptions& options = {});

/// When every disjunct of every delta(q) has exactly one move per direction,
/// the automaton can be read as nondeterministic directly. Disjuncts with
/// complementary literals are dropped.
std::optional<NondetAutomaton> direct_reading(const AlternatingAutomaton& a, std::size_t dnf_cap = kDefaultDnfCap);

}  // namespace stbuchi
