#include "robobench/executor_cap.hpp"

#include "robobench/canonical.hpp"

namespace robobench::agent {

std::string extract_script_source(const std::string& reply) {
    size_t open = reply.find("```");
    if (open == std::string::npos) {
        return reply;
    }
    size_t body_start = open + 3;
    // Skip an optional language tag on the fence line.
    size_t first_newline = reply.find('\n', body_start);
    if (first_newline == std::string::npos) {
        return reply;
    }
    body_start = first_newline + 1;
    size_t close = reply.find("```", body_start);
    if (close == std::string::npos) {
        return reply.substr(body_start);
    }
    return reply.substr(body_start, close - body_start);
}

std::string summarize_execution(const script::ExecutionLog& log) {
    std::string out;
    for (const auto& entry : log.entries) {
        out += render_call(entry.action, entry.args) + ": " + entry.result_summary + "\n";
    }
    if (!log.completed()) {
        int line = log.halted_line.value_or(0);
        out += "Execution halted at line " + std::to_string(line) + ": " + log.halt_reason + "\n";
    } else if (log.entries.empty()) {
        out += "Script completed with no actions.\n";
    } else {
        out += "Script completed: " + std::to_string(log.entries.size()) +
               " actions executed successfully.\n";
    }
    return out;
}

CapExecutor::CapExecutor(llm::ChatClient& llm, ActionDispatcher& actions,
                         const PromptLibrary& prompts, double temperature)
    : llm_(llm),
      actions_(actions),
      system_prompt_(substitute_placeholder(prompts.executor_cap_system, "ACTION_DOCS",
                                            action_docs_text())),
      temperature_(temperature) {}

std::string CapExecutor::generate_script(const std::string& subtask) {
    llm::ChatRequest request;
    request.temperature = temperature_;
    request.messages.push_back(llm::system_message(system_prompt_));
    request.messages.push_back(llm::user_message(subtask));
    llm::ChatReply reply = llm_.complete(request);
    llm_seconds_ += reply.seconds;
    return extract_script_source(reply.message.content);
}

std::string CapExecutor::execute_subtask(const std::string& subtask) {
    last_log_ = {};
    std::string source;
    try {
        source = generate_script(subtask);
    } catch (const llm::ChatError& e) {
        return std::string("Executor error: model call failed: ") + e.what();
    }
    if (source.find_first_not_of(" \t\r\n") == std::string::npos) {
        return "Executor error: the model returned an empty script.";
    }

    auto parsed = script::parse_script(source);
    if (auto* error = std::get_if<script::ParseError>(&parsed)) {
        return "Script parse error at " + error->to_string();
    }

    try {
        last_log_ = script::run_script(std::get<script::ActionScript>(parsed), actions_);
    } catch (const DispatchTransportError& e) {
        return std::string("Executor error: action service unreachable: ") + e.what();
    }
    return summarize_execution(last_log_);
}

}  // namespace robobench::agent
