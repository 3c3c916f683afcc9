#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "robobench/common.hpp"

namespace robobench::llm {

enum class Role { System, User, Assistant, Tool };

std::string role_to_string(Role role);

struct ToolCallRequest {
    std::string id;
    std::string name;
    Json arguments;               // parsed arguments
    bool arguments_valid = true;  // false when the wire payload was not valid JSON
    std::string raw_arguments;    // original text, kept for feedback messages
};

struct ChatMessage {
    Role role = Role::User;
    std::string content;
    std::vector<ToolCallRequest> tool_calls;  // assistant messages only
    std::string tool_call_id;                 // tool messages only
};

ChatMessage system_message(std::string content);
ChatMessage user_message(std::string content);
ChatMessage assistant_message(std::string content);
ChatMessage assistant_tool_call(const std::string& name, Json arguments, std::string id = "");
ChatMessage tool_message(std::string tool_call_id, std::string content);

struct ToolSchema {
    std::string name;
    std::string description;
    Json parameters;  // JSON-schema object
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;  // non-empty, first message is the system prompt
    std::vector<ToolSchema> tools;
    double temperature = 0.0;
};

enum class ChatErrorKind { Transport, HttpStatus, Parse, ScriptExhausted, BadRequest };

struct ChatError : std::runtime_error {
    ChatError(ChatErrorKind kind_, const std::string& message, int attempts_ = 1)
        : std::runtime_error(message), kind(kind_), attempts(attempts_) {}
    ChatErrorKind kind;
    int attempts;
};

/// One completion: the assistant reply plus the wall-clock duration of the
/// call, so callers can attribute model time per task.
struct ChatReply {
    ChatMessage message;
    double seconds = 0.0;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatReply complete(const ChatRequest& request) = 0;
};

/// Deterministic scripted provider. Each complete() pops the next canned
/// assistant message; popping past the end raises ScriptExhausted. Pops are
/// serialized, so a shared mock is safe across threads.
class MockChatClient : public ChatClient {
public:
    explicit MockChatClient(std::vector<ChatMessage> script);
    ChatReply complete(const ChatRequest& request) override;

    size_t consumed() const;
    size_t remaining() const;

    /// The requests seen so far, in order; used by tests to inspect prompts.
    std::vector<ChatRequest> seen_requests() const;

private:
    mutable std::mutex mutex_;
    std::vector<ChatMessage> script_;
    std::vector<ChatRequest> requests_;
    size_t next_ = 0;
};

std::unique_ptr<MockChatClient> mock_provider(std::vector<ChatMessage> script);

struct EndpointConfig {
    std::string base_url;     // e.g. https://api.openai.com/v1
    std::string model;
    std::string api_key_env;  // name of the environment variable holding the credential
    double timeout_seconds = 120.0;
    int retries = 2;
    int retry_backoff_ms = 200;
};

/// Chat-completion client speaking the common JSON wire protocol
/// (role-tagged messages, function-style tool calls). Transport failures,
/// retryable statuses (429/5xx), and unparseable bodies are retried up to
/// `retries` times with linear backoff before a ChatError escapes.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(EndpointConfig config);
    ChatReply complete(const ChatRequest& request) override;

    const EndpointConfig& config() const { return config_; }

    // Wire helpers, exposed for tests.
    static Json request_body(const ChatRequest& request);
    static ChatMessage parse_completion(const Json& body);

private:
    EndpointConfig config_;
    std::string host_;         // scheme://host[:port]
    std::string path_prefix_;  // leading path, e.g. /v1
};

}  // namespace robobench::llm
