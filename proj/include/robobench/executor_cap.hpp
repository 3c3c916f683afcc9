#pragma once

#include "robobench/script.hpp"
#include "robobench/planner.hpp"

namespace robobench::agent {

/// Extracts the program source from a model reply: the contents of the first
/// fenced code block, or the whole reply when no fence is present.
std::string extract_script_source(const std::string& reply);

/// Renders an execution log as the observation text handed back to the
/// planner: one line per executed action, then the halt position and reason
/// when the run stopped early.
std::string summarize_execution(const script::ExecutionLog& log);

/// Code-as-Policy: prompts the model for an action-script program, parses
/// it, and interprets it against the action service in a single run. Parse
/// errors and mid-run failures are reported through the observation so the
/// planner can rephrase or recover.
class CapExecutor : public SubtaskExecutor {
public:
    CapExecutor(llm::ChatClient& llm, ActionDispatcher& actions, const PromptLibrary& prompts,
                double temperature = 0.0);

    std::string execute_subtask(const std::string& subtask) override;
    std::string mode_name() const override { return "cap"; }
    double llm_seconds() const override { return llm_seconds_; }

    /// Prompt + extraction only; exposed for tests.
    std::string generate_script(const std::string& subtask);

    const script::ExecutionLog& last_log() const { return last_log_; }

private:
    llm::ChatClient& llm_;
    ActionDispatcher& actions_;
    std::string system_prompt_;  // action docs substituted in
    double temperature_ = 0.0;
    double llm_seconds_ = 0.0;
    script::ExecutionLog last_log_;
};

}  // namespace robobench::agent
