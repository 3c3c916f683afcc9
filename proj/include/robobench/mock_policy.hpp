#pragma once

#include "robobench/corpus.hpp"
#include "robobench/llm.hpp"

namespace robobench::bench {

enum class Mode { Cap, Tap };

std::string mode_to_string(Mode mode);

/// Canned planner and executor scripts that solve one benchmark instance
/// perfectly, derived from its ground truth. The planner script emits one
/// pick-and-place subtask per ground-truth pair and then finishes; the
/// executor script resolves each subtask with the matching tool calls (TaP)
/// or a two-line action-script program (CaP). Used by network-free runs and
/// determinism checks.
struct MockRunScripts {
    std::vector<llm::ChatMessage> planner;
    std::vector<llm::ChatMessage> executor;
};

MockRunScripts make_perfect_scripts(const TaskInstance& instance, Mode mode);

/// One pick-and-place unit extracted from a ground truth trace.
struct ManipulationPair {
    std::string object_name;
    std::string reference;
    std::string relation;
};

/// Decomposes a ground truth of pick/place(get_pose(...)) pairs. Throws
/// ConfigError when the trace does not follow that shape.
std::vector<ManipulationPair> extract_pairs(const std::vector<std::string>& ground_truth);

/// Natural phrasing for a pick-and-place subtask, e.g.
/// "Pick up the lemon and place it in the trash."
std::string subtask_phrase(const ManipulationPair& pair);

}  // namespace robobench::bench
