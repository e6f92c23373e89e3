#pragma once

// Witness, run-prefix and scene files (JSON) and the DOT view of a witness.

#include <string>

#include "stbuchi/automata.hpp"
#include "stbuchi/emptiness.hpp"

namespace stbuchi {

inline constexpr const char* kWitnessFormat = "stbuchi-witness";
inline constexpr int kWitnessVersion = 1;

/// Pretty-printed JSON, nodes in lexicographic order keyed by word.
std::string witness_to_json(const NondetAutomaton& a, const FiniteTreeModel& m);
/// Throws MalformedModel on structural or naming problems.
FiniteTreeModel witness_from_json(const NondetAutomaton& a, const std::string& text);

std::string witness_to_dot(const NondetAutomaton& a, const FiniteTreeModel& m);

std::string run_prefix_to_json(const NondetAutomaton& a, const RunPrefix& r);
RunPrefix run_prefix_from_json(const NondetAutomaton& a, const std::string& text);

std::string scene_to_json(const Signature& sig, const SceneTreePrefix& t);
SceneTreePrefix scene_from_json(const Signature& sig, const std::string& text);

}  // namespace stbuchi
