#pragma once

#include "robobench/actions.hpp"
#include "robobench/planner.hpp"

namespace robobench::agent {

struct TapConfig {
    int max_tool_steps = 15;  // dispatched tool-call rounds per subtask
    double temperature = 0.0;
};

/// Tool-as-Policy: resolves one subtask through an iterative tool-call loop.
/// Each assistant message either carries tool calls, which are dispatched in
/// order and answered with tool-role result messages, or plain content,
/// which becomes the observation returned to the planner. Malformed tool
/// arguments are fed back as error results so the model can self-correct.
class TapExecutor : public SubtaskExecutor {
public:
    TapExecutor(llm::ChatClient& llm, ActionDispatcher& actions, const PromptLibrary& prompts,
                TapConfig config = {});

    std::string execute_subtask(const std::string& subtask) override;
    std::string mode_name() const override { return "tap"; }
    double llm_seconds() const override { return llm_seconds_; }

    int dispatched_calls() const { return dispatched_calls_; }

private:
    llm::ChatClient& llm_;
    ActionDispatcher& actions_;
    std::string system_prompt_;
    std::vector<llm::ToolSchema> tools_;
    TapConfig config_;
    double llm_seconds_ = 0.0;
    int dispatched_calls_ = 0;
};

}  // namespace robobench::agent
