#include <doctest.h>

#include <httplib.h>

#include "robobench/llm.hpp"

using namespace robobench;
using namespace robobench::llm;

namespace {

ChatRequest basic_request() {
    ChatRequest request;
    request.messages.push_back(system_message("system prompt"));
    request.messages.push_back(user_message("hello"));
    return request;
}

}  // namespace

TEST_CASE("mock provider pops canned messages in order and then errors") {
    auto mock = mock_provider({assistant_message("one"), assistant_message("two"),
                               assistant_message("three")});
    CHECK(mock->complete(basic_request()).message.content == "one");
    CHECK(mock->complete(basic_request()).message.content == "two");
    CHECK(mock->complete(basic_request()).message.content == "three");
    CHECK(mock->consumed() == 3);
    CHECK_THROWS_AS(mock->complete(basic_request()), ChatError);
    try {
        mock->complete(basic_request());
    } catch (const ChatError& e) {
        CHECK(e.kind == ChatErrorKind::ScriptExhausted);
    }
}

TEST_CASE("mock provider passes scripted tool calls through verbatim") {
    auto mock = mock_provider(
        {assistant_tool_call("pick", Json{{"object_name", "lemon"}})});
    ChatReply reply = mock->complete(basic_request());
    REQUIRE(reply.message.tool_calls.size() == 1);
    CHECK(reply.message.tool_calls[0].name == "pick");
    CHECK(reply.message.tool_calls[0].arguments == Json{{"object_name", "lemon"}});
    CHECK_FALSE(reply.message.tool_calls[0].id.empty());
}

TEST_CASE("mock scripts must be non-empty") {
    CHECK_THROWS_AS(MockChatClient({}), ConfigError);
}

TEST_CASE("request invariants are enforced") {
    auto mock = mock_provider({assistant_message("x")});
    ChatRequest empty;
    CHECK_THROWS_AS(mock->complete(empty), ChatError);
    ChatRequest no_system;
    no_system.messages.push_back(user_message("hi"));
    CHECK_THROWS_AS(mock->complete(no_system), ChatError);
}

TEST_CASE("identical scripts yield identical transcripts") {
    std::vector<ChatMessage> script = {assistant_message("Thought: a\nAction: b"),
                                       assistant_message("Thought: c\nAction: Finish[d]")};
    auto run = [&script] {
        MockChatClient client(script);
        std::string transcript;
        for (int i = 0; i < 2; ++i) {
            transcript += client.complete(basic_request()).message.content + "|";
        }
        return transcript;
    };
    CHECK(run() == run());
}

TEST_CASE("wire format: request body carries messages, tools, temperature") {
    ChatRequest request = basic_request();
    request.model = "test-model";
    request.temperature = 0.0;
    request.tools.push_back({"pick", "Pick an object", Json{{"type", "object"}}});
    request.messages.push_back(assistant_tool_call("pick", Json{{"object_name", "lemon"}}, "c1"));
    request.messages.push_back(tool_message("c1", "{\"ok\":true}"));

    Json body = HttpChatClient::request_body(request);
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"] == 0.0);
    REQUIRE(body["messages"].size() == 4);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][2]["tool_calls"][0]["function"]["name"] == "pick");
    CHECK(body["messages"][3]["role"] == "tool");
    CHECK(body["messages"][3]["tool_call_id"] == "c1");
    REQUIRE(body["tools"].size() == 1);
    CHECK(body["tools"][0]["function"]["name"] == "pick");
}

TEST_CASE("wire format: completions parse content and tool calls") {
    Json body = Json::parse(R"({
        "choices": [{"message": {
            "content": null,
            "tool_calls": [{"id": "call_9", "type": "function",
                            "function": {"name": "pick",
                                         "arguments": "{\"object_name\": \"lemon\"}"}}]
        }}]
    })");
    ChatMessage msg = HttpChatClient::parse_completion(body);
    REQUIRE(msg.tool_calls.size() == 1);
    CHECK(msg.tool_calls[0].name == "pick");
    CHECK(msg.tool_calls[0].arguments_valid);
    CHECK(msg.tool_calls[0].arguments["object_name"] == "lemon");

    Json text_body = Json::parse(R"({"choices": [{"message": {"content": "hi"}}]})");
    CHECK(HttpChatClient::parse_completion(text_body).content == "hi");

    Json bad_args = Json::parse(R"({
        "choices": [{"message": {"tool_calls": [{"id": "x", "type": "function",
            "function": {"name": "pick", "arguments": "not json"}}]}}]
    })");
    ChatMessage bad = HttpChatClient::parse_completion(bad_args);
    REQUIRE(bad.tool_calls.size() == 1);
    CHECK_FALSE(bad.tool_calls[0].arguments_valid);

    CHECK_THROWS_AS(HttpChatClient::parse_completion(Json{{"choices", Json::array()}}), ChatError);
}

TEST_CASE("http client round-trips against a stub endpoint") {
    httplib::Server server;
    int hits = 0;
    server.Post("/v1/chat/completions", [&hits](const httplib::Request& req,
                                                httplib::Response& res) {
        ++hits;
        Json body = Json::parse(req.body);
        CHECK(body["model"] == "stub-model");
        Json reply{{"choices", Json::array({Json{
                       {"message", Json{{"role", "assistant"}, {"content", "stub reply"}}}}})}};
        res.set_content(reply.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    config.model = "stub-model";
    config.retries = 0;
    HttpChatClient client(config);
    ChatReply reply = client.complete(basic_request());
    CHECK(reply.message.content == "stub reply");
    CHECK(reply.seconds >= 0.0);
    CHECK(hits == 1);

    server.stop();
    thread.join();
}

TEST_CASE("http client retries 5xx and gives up with a typed error") {
    httplib::Server server;
    int hits = 0;
    server.Post("/chat/completions", [&hits](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.model = "m";
    config.retries = 2;
    config.retry_backoff_ms = 1;
    HttpChatClient client(config);
    try {
        client.complete(basic_request());
        FAIL("expected ChatError");
    } catch (const ChatError& e) {
        CHECK(e.kind == ChatErrorKind::Transport);
        CHECK(e.attempts == 3);
    }
    CHECK(hits == 3);

    server.stop();
    thread.join();
}

TEST_CASE("unreachable endpoint fails after the configured retries") {
    EndpointConfig config;
    config.base_url = "http://127.0.0.1:1";  // nothing listens here
    config.model = "m";
    config.retries = 1;
    config.retry_backoff_ms = 1;
    config.timeout_seconds = 1;
    HttpChatClient client(config);
    CHECK_THROWS_AS(client.complete(basic_request()), ChatError);
}

TEST_CASE("missing credential env var is a configuration-style error") {
    EndpointConfig config;
    config.base_url = "http://127.0.0.1:9";
    config.model = "m";
    config.api_key_env = "ROBOBENCH_TEST_KEY_THAT_IS_NOT_SET";
    HttpChatClient client(config);
    try {
        client.complete(basic_request());
        FAIL("expected ChatError");
    } catch (const ChatError& e) {
        CHECK(e.kind == ChatErrorKind::BadRequest);
    }
}
