#include "robobench/llm.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace robobench::llm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_request(const ChatRequest& request) {
    if (request.messages.empty()) {
        throw ChatError(ChatErrorKind::BadRequest, "chat request has no messages");
    }
    if (request.messages.front().role != Role::System) {
        throw ChatError(ChatErrorKind::BadRequest, "first chat message must be the system prompt");
    }
    if (request.temperature < 0.0) {
        throw ChatError(ChatErrorKind::BadRequest, "temperature must be >= 0");
    }
}

}  // namespace

std::string role_to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "user";
}

ChatMessage system_message(std::string content) {
    return ChatMessage{Role::System, std::move(content), {}, {}};
}

ChatMessage user_message(std::string content) {
    return ChatMessage{Role::User, std::move(content), {}, {}};
}

ChatMessage assistant_message(std::string content) {
    return ChatMessage{Role::Assistant, std::move(content), {}, {}};
}

ChatMessage assistant_tool_call(const std::string& name, Json arguments, std::string id) {
    ChatMessage msg{Role::Assistant, "", {}, {}};
    ToolCallRequest call;
    call.id = std::move(id);
    call.name = name;
    call.arguments = std::move(arguments);
    call.raw_arguments = call.arguments.dump();
    msg.tool_calls.push_back(std::move(call));
    return msg;
}

ChatMessage tool_message(std::string tool_call_id, std::string content) {
    ChatMessage msg{Role::Tool, std::move(content), {}, std::move(tool_call_id)};
    return msg;
}

MockChatClient::MockChatClient(std::vector<ChatMessage> script) : script_(std::move(script)) {
    if (script_.empty()) {
        throw ConfigError("mock provider script must not be empty");
    }
    // Auto-assign tool-call ids so scripted fixtures need not invent them.
    int counter = 0;
    for (auto& msg : script_) {
        for (auto& call : msg.tool_calls) {
            ++counter;
            if (call.id.empty()) {
                call.id = "call_" + std::to_string(counter);
            }
        }
    }
}

ChatReply MockChatClient::complete(const ChatRequest& request) {
    check_request(request);
    auto start = Clock::now();
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back(request);
    if (next_ >= script_.size()) {
        throw ChatError(ChatErrorKind::ScriptExhausted,
                        "mock provider script exhausted after " + std::to_string(script_.size()) +
                            " messages");
    }
    ChatReply reply;
    reply.message = script_[next_++];
    reply.seconds = seconds_since(start);
    return reply;
}

size_t MockChatClient::consumed() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return next_;
}

size_t MockChatClient::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return script_.size() - next_;
}

std::vector<ChatRequest> MockChatClient::seen_requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
}

std::unique_ptr<MockChatClient> mock_provider(std::vector<ChatMessage> script) {
    return std::make_unique<MockChatClient>(std::move(script));
}

HttpChatClient::HttpChatClient(EndpointConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) {
        throw ConfigError("endpoint base_url must not be empty");
    }
    // Split scheme://host[:port] from any path prefix.
    auto scheme_end = config_.base_url.find("://");
    size_t path_start =
        config_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = config_.base_url;
    } else {
        host_ = config_.base_url.substr(0, path_start);
        path_prefix_ = config_.base_url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') {
            path_prefix_.pop_back();
        }
    }
}

Json HttpChatClient::request_body(const ChatRequest& request) {
    Json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    Json messages = Json::array();
    for (const auto& msg : request.messages) {
        Json m;
        m["role"] = role_to_string(msg.role);
        m["content"] = msg.content;
        if (!msg.tool_calls.empty()) {
            Json calls = Json::array();
            for (const auto& call : msg.tool_calls) {
                Json c;
                c["id"] = call.id;
                c["type"] = "function";
                c["function"] = {{"name", call.name}, {"arguments", call.arguments.dump()}};
                calls.push_back(std::move(c));
            }
            m["tool_calls"] = std::move(calls);
        }
        if (msg.role == Role::Tool) {
            m["tool_call_id"] = msg.tool_call_id;
        }
        messages.push_back(std::move(m));
    }
    body["messages"] = std::move(messages);
    if (!request.tools.empty()) {
        Json tools = Json::array();
        for (const auto& tool : request.tools) {
            Json t;
            t["type"] = "function";
            t["function"] = {{"name", tool.name},
                             {"description", tool.description},
                             {"parameters", tool.parameters}};
            tools.push_back(std::move(t));
        }
        body["tools"] = std::move(tools);
    }
    return body;
}

ChatMessage HttpChatClient::parse_completion(const Json& body) {
    if (!body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
        throw ChatError(ChatErrorKind::Parse, "completion body has no choices");
    }
    const Json& message = body["choices"][0].value("message", Json(nullptr));
    if (!message.is_object()) {
        throw ChatError(ChatErrorKind::Parse, "completion choice has no message");
    }
    ChatMessage out;
    out.role = Role::Assistant;
    if (message.contains("content") && message["content"].is_string()) {
        out.content = message["content"].get<std::string>();
    }
    if (message.contains("tool_calls") && message["tool_calls"].is_array()) {
        for (const Json& call : message["tool_calls"]) {
            ToolCallRequest req;
            req.id = call.value("id", "");
            const Json& fn = call.value("function", Json(nullptr));
            if (!fn.is_object() || !fn.contains("name")) {
                throw ChatError(ChatErrorKind::Parse, "tool call without a function name");
            }
            req.name = fn["name"].get<std::string>();
            req.raw_arguments = fn.value("arguments", "{}");
            try {
                req.arguments = Json::parse(req.raw_arguments);
                req.arguments_valid = req.arguments.is_object();
            } catch (const Json::parse_error&) {
                req.arguments = Json::object();
                req.arguments_valid = false;
            }
            out.tool_calls.push_back(std::move(req));
        }
    }
    return out;
}

ChatReply HttpChatClient::complete(const ChatRequest& request) {
    check_request(request);
    auto start = Clock::now();

    Json body = request_body(request);
    if (body["model"].get<std::string>().empty()) {
        body["model"] = config_.model;
    }
    std::string payload = body.dump();

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            throw ChatError(ChatErrorKind::BadRequest,
                            "credential environment variable " + config_.api_key_env +
                                " is not set");
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error;
    int attempts = 0;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        ++attempts;
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.retry_backoff_ms * attempt));
        }
        httplib::Client client(host_);
        client.set_connection_timeout(static_cast<int>(config_.timeout_seconds), 0);
        client.set_read_timeout(static_cast<int>(config_.timeout_seconds), 0);
        auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "retryable status " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw ChatError(ChatErrorKind::HttpStatus,
                            "chat endpoint returned status " + std::to_string(res->status) + ": " +
                                res->body,
                            attempts);
        }
        Json parsed;
        try {
            parsed = Json::parse(res->body);
        } catch (const Json::parse_error& e) {
            last_error = std::string("unparseable body: ") + e.what();
            continue;
        }
        ChatReply reply;
        reply.message = parse_completion(parsed);
        reply.seconds = seconds_since(start);
        return reply;
    }
    throw ChatError(ChatErrorKind::Transport,
                    "chat call failed after " + std::to_string(attempts) + " attempts: " +
                        last_error,
                    attempts);
}

}  // namespace robobench::llm
