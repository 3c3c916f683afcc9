#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robobench/llm.hpp"
#include "robobench/prompts.hpp"

namespace robobench::agent {

enum class SubtaskKind { QueryPositions, QueryNames, AtomicManipulation, Other };

std::string subtask_kind_name(SubtaskKind kind);

/// Pattern match against the planner's subtask templates. `Other` is allowed
/// but flagged on the step.
SubtaskKind classify_subtask(const std::string& text);

struct PlannerStep {
    std::string thought;
    bool is_finish = false;
    std::string subtask;       // when !is_finish
    SubtaskKind kind = SubtaskKind::Other;
    std::string final_answer;  // when is_finish
    std::string observation;   // filled after execution
};

struct PlannerConfig {
    int max_steps = 20;
    int repair_retries = 1;
    double temperature = 0.0;
};

/// Result of one full planning loop. The simulator trace lives with the
/// dispatcher; this captures the conversation side.
struct TaskTrace {
    std::vector<PlannerStep> steps;
    bool finished = false;          // planner emitted Finish
    bool unfinished_budget = false; // hit max_steps without Finish
    bool format_error = false;      // aborted after a failed repair retry
    std::string format_error_detail;
    std::string final_answer;
    double llm_seconds = 0.0;  // summed model-call durations (planner + executor)
    int planner_llm_calls = 0;

    std::string transcript() const;  // human-readable Thought/Action/Observation dump
};

/// Executes one subtask and returns the observation for the planner.
class SubtaskExecutor {
public:
    virtual ~SubtaskExecutor() = default;
    virtual std::string execute_subtask(const std::string& subtask) = 0;
    virtual std::string mode_name() const = 0;
    virtual double llm_seconds() const = 0;
};

/// Messages sent for one planner step: the system guidelines followed by a
/// user message holding the instruction and the serialized history of
/// thought/action/observation triples, oldest first.
std::vector<llm::ChatMessage> build_planner_messages(const std::string& instruction,
                                                     const std::vector<PlannerStep>& history,
                                                     const PromptLibrary& prompts);

struct StepOutcome {
    std::optional<PlannerStep> step;  // absent on format error
    std::string error;
    int llm_calls = 0;
    double llm_seconds = 0.0;
};

/// One reasoning step: prompt, completion, reply parsing. A reply that does
/// not contain exactly one Thought/Action pair triggers a single repair
/// retry with an explicit format reminder before giving up.
StepOutcome plan_step(const std::string& instruction, const std::vector<PlannerStep>& history,
                      llm::ChatClient& llm, const PromptLibrary& prompts,
                      const PlannerConfig& config = {});

/// Full loop: plan, execute, observe, until Finish or the step budget runs
/// out. The executor owns the action surface; failures inside a subtask are
/// reported through observations and the loop continues.
TaskTrace run_task(const std::string& instruction, SubtaskExecutor& executor,
                   llm::ChatClient& llm, const PromptLibrary& prompts,
                   const PlannerConfig& config = {});

/// Parses a raw planner reply into thought/action. Exposed for tests.
struct ParsedReply {
    bool ok = false;
    std::string error;
    std::string thought;
    std::string action;
};
ParsedReply parse_planner_reply(const std::string& reply);

}  // namespace robobench::agent
