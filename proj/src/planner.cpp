#include "robobench/planner.hpp"

#include <algorithm>
#include <cctype>

namespace robobench::agent {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

constexpr const char* kFormatReminder =
    "Your previous reply did not follow the required format. Reply again with exactly one "
    "\"Thought:\" line followed by exactly one \"Action:\" line. Use Action: Finish[answer] "
    "only when the task is complete.";

}  // namespace

std::string subtask_kind_name(SubtaskKind kind) {
    switch (kind) {
        case SubtaskKind::QueryPositions: return "query_positions";
        case SubtaskKind::QueryNames: return "query_names";
        case SubtaskKind::AtomicManipulation: return "atomic_manipulation";
        case SubtaskKind::Other: return "other";
    }
    return "other";
}

SubtaskKind classify_subtask(const std::string& text) {
    std::string lower = to_lower(text);
    bool mentions_objects =
        lower.find("object") != std::string::npos || lower.find("reference") != std::string::npos;
    if (lower.find("position") != std::string::npos && mentions_objects) {
        return SubtaskKind::QueryPositions;
    }
    if (lower.find("name") != std::string::npos && mentions_objects) {
        return SubtaskKind::QueryNames;
    }
    if (lower.find("pick") != std::string::npos || lower.find("place") != std::string::npos ||
        lower.find("move") != std::string::npos || lower.find("put") != std::string::npos) {
        return SubtaskKind::AtomicManipulation;
    }
    return SubtaskKind::Other;
}

std::string TaskTrace::transcript() const {
    std::string out;
    for (const auto& step : steps) {
        out += "Thought: " + step.thought + "\n";
        if (step.is_finish) {
            out += "Action: Finish[" + step.final_answer + "]\n";
        } else {
            out += "Action: " + step.subtask + "\n";
            out += "Observation: " + step.observation + "\n";
        }
    }
    if (format_error) {
        out += "[aborted: " + format_error_detail + "]\n";
    }
    if (unfinished_budget) {
        out += "[stopped: step budget exhausted]\n";
    }
    return out;
}

std::vector<llm::ChatMessage> build_planner_messages(const std::string& instruction,
                                                     const std::vector<PlannerStep>& history,
                                                     const PromptLibrary& prompts) {
    std::string user = "Task: " + instruction + "\n";
    if (!history.empty()) {
        user += "\nSteps so far:\n";
        for (const auto& step : history) {
            user += "Thought: " + step.thought + "\n";
            user += "Action: " + step.subtask + "\n";
            user += "Observation: " + step.observation + "\n";
        }
    }
    user += "\nWhat is your next step?";
    return {llm::system_message(prompts.planner_system), llm::user_message(user)};
}

ParsedReply parse_planner_reply(const std::string& reply) {
    ParsedReply parsed;
    size_t thought_pos = reply.find("Thought:");
    size_t action_pos = reply.find("Action:");
    if (thought_pos == std::string::npos) {
        parsed.error = "missing \"Thought:\" line";
        return parsed;
    }
    if (action_pos == std::string::npos) {
        parsed.error = "missing \"Action:\" line";
        return parsed;
    }
    if (action_pos < thought_pos) {
        parsed.error = "\"Action:\" appears before \"Thought:\"";
        return parsed;
    }
    if (reply.find("Action:", action_pos + 1) != std::string::npos) {
        parsed.error = "more than one \"Action:\" line (exactly one action per step)";
        return parsed;
    }
    parsed.thought = trim(reply.substr(thought_pos + 8, action_pos - (thought_pos + 8)));
    std::string action_text = reply.substr(action_pos + 7);
    // The action is a single line. Trailing prose is tolerated, a second
    // Thought is not: that would be a second step in one reply.
    size_t newline = action_text.find('\n');
    if (newline != std::string::npos) {
        std::string rest = action_text.substr(newline + 1);
        if (rest.find("Thought:") != std::string::npos) {
            parsed.error = "more than one step in a single reply";
            return parsed;
        }
        action_text = action_text.substr(0, newline);
    }
    parsed.action = trim(action_text);
    if (parsed.action.empty()) {
        parsed.error = "empty action";
        return parsed;
    }
    parsed.ok = true;
    return parsed;
}

namespace {

PlannerStep step_from_parsed(const ParsedReply& parsed) {
    PlannerStep step;
    step.thought = parsed.thought;
    const std::string& action = parsed.action;
    if (action.rfind("Finish[", 0) == 0 && action.back() == ']') {
        step.is_finish = true;
        step.final_answer = action.substr(7, action.size() - 8);
    } else {
        step.subtask = action;
        step.kind = classify_subtask(action);
    }
    return step;
}

}  // namespace

StepOutcome plan_step(const std::string& instruction, const std::vector<PlannerStep>& history,
                      llm::ChatClient& llm, const PromptLibrary& prompts,
                      const PlannerConfig& config) {
    StepOutcome outcome;
    std::vector<llm::ChatMessage> messages = build_planner_messages(instruction, history, prompts);
    llm::ChatRequest request;
    request.messages = messages;
    request.temperature = config.temperature;

    std::string last_error;
    for (int attempt = 0; attempt <= config.repair_retries; ++attempt) {
        llm::ChatReply reply = llm.complete(request);
        ++outcome.llm_calls;
        outcome.llm_seconds += reply.seconds;
        ParsedReply parsed = parse_planner_reply(reply.message.content);
        if (parsed.ok) {
            outcome.step = step_from_parsed(parsed);
            return outcome;
        }
        last_error = parsed.error;
        // Feed the malformed reply back with a format reminder and retry.
        request.messages.push_back(reply.message);
        request.messages.push_back(llm::user_message(kFormatReminder));
    }
    outcome.error = "planner reply format error: " + last_error;
    return outcome;
}

TaskTrace run_task(const std::string& instruction, SubtaskExecutor& executor,
                   llm::ChatClient& llm, const PromptLibrary& prompts,
                   const PlannerConfig& config) {
    TaskTrace trace;
    while (static_cast<int>(trace.steps.size()) < config.max_steps) {
        StepOutcome outcome = plan_step(instruction, trace.steps, llm, prompts, config);
        trace.planner_llm_calls += outcome.llm_calls;
        trace.llm_seconds += outcome.llm_seconds;
        if (!outcome.step) {
            trace.format_error = true;
            trace.format_error_detail = outcome.error;
            return trace;
        }
        PlannerStep step = std::move(*outcome.step);
        if (step.is_finish) {
            trace.finished = true;
            trace.final_answer = step.final_answer;
            trace.steps.push_back(std::move(step));
            return trace;
        }
        double before = executor.llm_seconds();
        step.observation = executor.execute_subtask(step.subtask);
        trace.llm_seconds += executor.llm_seconds() - before;
        trace.steps.push_back(std::move(step));
    }
    trace.unfinished_budget = true;
    return trace;
}

}  // namespace robobench::agent
