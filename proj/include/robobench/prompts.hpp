#pragma once

#include <string>

#include "robobench/common.hpp"

namespace robobench {

/// Prompt texts are data, shipped in the repo's prompts/ directory and
/// loaded at startup. The code-generation system prompt contains an
/// {{ACTION_DOCS}} placeholder that is filled from the action signature
/// table when the executor is constructed.
struct PromptLibrary {
    std::string planner_system;
    std::string executor_tap_system;
    std::string executor_cap_system;
    std::string judge_system;

    static PromptLibrary load(const std::string& directory);  // throws ConfigError
};

/// Replaces every occurrence of {{key}} in text.
std::string substitute_placeholder(std::string text, const std::string& key,
                                   const std::string& value);

}  // namespace robobench
