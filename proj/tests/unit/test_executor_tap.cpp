#include <doctest.h>

#include "robobench/executor_tap.hpp"
#include "test_support.hpp"

using namespace robobench;
using namespace robobench::agent;

TEST_CASE("tap: scripted pick-and-place resolves to the final summary") {
    LocalDispatcher actions(World::load_environment(3));
    auto mock = llm::mock_provider(
        {llm::assistant_tool_call("pick", Json{{"object_name", "lemon"}}),
         llm::assistant_tool_call("get_pose", Json{{"reference", "trash"}, {"relation", "in"}}),
         llm::assistant_tool_call("place",
                                  Json{{"pose", Json{{"position", {0.45, -0.2, 0.06}}}}}),
         llm::assistant_message("The lemon was successfully picked and placed in the trash.")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    std::string observation =
        executor.execute_subtask("Pick up the lemon and place it in the trash.");
    CHECK(observation == "The lemon was successfully picked and placed in the trash.");
    CHECK(actions.world().trace().size() == 3);
    CHECK(actions.world().find_object("lemon")->contained_in == "trash");
    CHECK(executor.dispatched_calls() == 3);
}

TEST_CASE("tap: self-correction after an unknown object name") {
    LocalDispatcher actions(World::load_environment(3));
    auto mock = llm::mock_provider(
        {llm::assistant_tool_call("pick", Json{{"object_name", "orange"}}),
         llm::assistant_tool_call("pick", Json{{"object_name", "lemon"}}),
         llm::assistant_message("Picked the lemon after correcting the name.")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    std::string observation = executor.execute_subtask("Pick up the lemon.");
    CHECK(observation == "Picked the lemon after correcting the name.");

    // Two tool steps logged in the sim trace, failure first.
    auto lines = actions.world().trace_lines();
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "pick(object_name=\"orange\") -> fail");
    CHECK(lines[1] == "pick(object_name=\"lemon\") -> ok");

    // The error message was fed back as a tool message.
    auto requests = mock->seen_requests();
    REQUIRE(requests.size() == 3);
    const auto& second = requests[1].messages;
    REQUIRE(second.back().role == llm::Role::Tool);
    CHECK(second.back().content.find("Object orange not found") != std::string::npos);
}

TEST_CASE("tap: every dispatched call appends exactly one tool message") {
    LocalDispatcher actions(World::load_environment(3));
    auto mock = llm::mock_provider(
        {llm::assistant_tool_call("get_objects", Json::object()),
         llm::assistant_tool_call("get_reference_names", Json::object()),
         llm::assistant_message("done")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    executor.execute_subtask("Get the names of objects present in the environment");
    auto requests = mock->seen_requests();
    // Request k has 2 (system+user) + 2*k messages (assistant+tool per round).
    REQUIRE(requests.size() == 3);
    CHECK(requests[0].messages.size() == 2);
    CHECK(requests[1].messages.size() == 4);
    CHECK(requests[2].messages.size() == 6);
    CHECK(actions.world().trace().size() == 2);
}

TEST_CASE("tap: multiple tool calls in one assistant message dispatch in order") {
    LocalDispatcher actions(World::load_environment(3));
    llm::ChatMessage multi;
    multi.role = llm::Role::Assistant;
    llm::ToolCallRequest c1{"a", "pick", Json{{"object_name", "lemon"}}, true, ""};
    llm::ToolCallRequest c2{"b", "move_to_home_pos", Json::object(), true, ""};
    multi.tool_calls = {c1, c2};
    auto mock = llm::mock_provider({multi, llm::assistant_message("both done")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    executor.execute_subtask("Pick up the lemon.");
    auto lines = actions.world().trace_lines();
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "pick(object_name=\"lemon\") -> ok");
    CHECK(lines[1] == "move_to_home_pos() -> ok");
}

TEST_CASE("tap: malformed arguments are fed back without reaching the sim") {
    LocalDispatcher actions(World::load_environment(3));
    auto mock = llm::mock_provider(
        {llm::assistant_tool_call("pick", Json{{"object", "lemon"}}),  // wrong key
         llm::assistant_tool_call("pick", Json{{"object_name", "lemon"}}),
         llm::assistant_message("recovered")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    std::string observation = executor.execute_subtask("Pick up the lemon.");
    CHECK(observation == "recovered");
    CHECK(actions.world().trace().size() == 1);  // only the valid call reached the sim
    auto requests = mock->seen_requests();
    CHECK(requests[1].messages.back().content.find("Invalid arguments") != std::string::npos);
}

TEST_CASE("tap: unparseable argument JSON is reported to the model") {
    LocalDispatcher actions(World::load_environment(3));
    llm::ChatMessage bad;
    bad.role = llm::Role::Assistant;
    llm::ToolCallRequest call;
    call.id = "x";
    call.name = "pick";
    call.arguments_valid = false;
    call.raw_arguments = "{broken";
    bad.tool_calls = {call};
    auto mock = llm::mock_provider({bad, llm::assistant_message("gave up")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    executor.execute_subtask("Pick something.");
    CHECK(actions.world().trace().empty());
    auto requests = mock->seen_requests();
    CHECK(requests[1].messages.back().content.find("Could not parse") != std::string::npos);
}

TEST_CASE("tap: loop truncates at the tool-step budget") {
    LocalDispatcher actions(World::load_environment(3));
    std::vector<llm::ChatMessage> script;
    for (int i = 0; i < 16; ++i) {
        script.push_back(llm::assistant_tool_call("get_objects", Json::object()));
    }
    auto mock = llm::mock_provider(script);
    TapExecutor executor(*mock, actions, testsupport::prompts());
    std::string observation = executor.execute_subtask("Loop.");
    CHECK(observation.find("budget exhausted") != std::string::npos);
    CHECK(actions.world().trace().size() == 15);  // stops at max_tool_steps
    CHECK_FALSE(observation.empty());
}

TEST_CASE("tap: empty final content still yields a non-empty observation") {
    LocalDispatcher actions(World::load_environment(3));
    auto mock = llm::mock_provider({llm::assistant_tool_call("get_objects", Json::object()),
                                    llm::assistant_message("")});
    TapExecutor executor(*mock, actions, testsupport::prompts());
    std::string observation = executor.execute_subtask("Look around.");
    CHECK_FALSE(observation.empty());
}
