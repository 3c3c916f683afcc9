#include "robobench/executor_tap.hpp"

namespace robobench::agent {

TapExecutor::TapExecutor(llm::ChatClient& llm, ActionDispatcher& actions,
                         const PromptLibrary& prompts, TapConfig config)
    : llm_(llm),
      actions_(actions),
      system_prompt_(prompts.executor_tap_system),
      tools_(build_tool_schemas()),
      config_(config) {}

std::string TapExecutor::execute_subtask(const std::string& subtask) {
    llm::ChatRequest request;
    request.tools = tools_;
    request.temperature = config_.temperature;
    request.messages.push_back(llm::system_message(system_prompt_));
    request.messages.push_back(llm::user_message(subtask));

    std::string last_result_text;
    int rounds = 0;
    while (true) {
        llm::ChatReply reply;
        try {
            reply = llm_.complete(request);
        } catch (const llm::ChatError& e) {
            return std::string("Executor error: model call failed: ") + e.what();
        }
        llm_seconds_ += reply.seconds;

        if (reply.message.tool_calls.empty()) {
            std::string observation = reply.message.content;
            if (observation.empty()) {
                observation = last_result_text.empty()
                                  ? "Executor produced no final summary."
                                  : "Executor finished. Last result: " + last_result_text;
            }
            return observation;
        }

        if (rounds >= config_.max_tool_steps) {
            std::string observation =
                "Tool-call budget exhausted after " + std::to_string(config_.max_tool_steps) +
                " steps; the subtask may be incomplete.";
            if (!last_result_text.empty()) {
                observation += " Last result: " + last_result_text;
            }
            return observation;
        }
        ++rounds;

        request.messages.push_back(reply.message);
        for (const auto& call : reply.message.tool_calls) {
            std::string result_text;
            if (!call.arguments_valid) {
                Json err{{"ok", false},
                         {"message", "Could not parse tool arguments as a JSON object: " +
                                         call.raw_arguments}};
                result_text = err.dump();
            } else {
                DispatchOutcome outcome;
                try {
                    outcome = actions_.dispatch(call.name, call.arguments);
                } catch (const DispatchTransportError& e) {
                    return std::string("Executor error: action service unreachable: ") + e.what();
                }
                if (outcome.status == DispatchOutcome::Status::Ok) {
                    ++dispatched_calls_;
                }
                result_text = outcome.to_json().dump();
            }
            last_result_text = result_text;
            request.messages.push_back(llm::tool_message(call.id, std::move(result_text)));
        }
    }
}

}  // namespace robobench::agent
