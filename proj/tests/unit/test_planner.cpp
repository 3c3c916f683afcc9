#include <doctest.h>

#include "robobench/planner.hpp"
#include "test_support.hpp"

using namespace robobench;
using namespace robobench::agent;

namespace {

/// Executor stub that records subtasks and replies with canned observations.
class StubExecutor : public SubtaskExecutor {
public:
    std::string execute_subtask(const std::string& subtask) override {
        subtasks.push_back(subtask);
        return "observation " + std::to_string(subtasks.size());
    }
    std::string mode_name() const override { return "stub"; }
    double llm_seconds() const override { return 0.0; }

    std::vector<std::string> subtasks;
};

}  // namespace

TEST_CASE("reply parsing: template subtasks and Finish") {
    ParsedReply named = parse_planner_reply(
        "Thought: need object list\nAction: Get the names of objects present in the environment");
    REQUIRE(named.ok);
    CHECK(named.thought == "need object list");
    CHECK(classify_subtask(named.action) == SubtaskKind::QueryNames);

    ParsedReply positions = parse_planner_reply(
        "Thought: where are things\nAction: Get the position of objects in the environment.");
    REQUIRE(positions.ok);
    CHECK(classify_subtask(positions.action) == SubtaskKind::QueryPositions);

    ParsedReply manipulation = parse_planner_reply(
        "Thought: move it\nAction: Pick up the lemon and place it in the trash.");
    REQUIRE(manipulation.ok);
    CHECK(classify_subtask(manipulation.action) == SubtaskKind::AtomicManipulation);

    CHECK(classify_subtask("Recite a poem") == SubtaskKind::Other);

    ParsedReply finish = parse_planner_reply("Thought: done\nAction: Finish[all fruits moved]");
    REQUIRE(finish.ok);
    CHECK(finish.action == "Finish[all fruits moved]");
}

TEST_CASE("reply parsing: format violations") {
    CHECK_FALSE(parse_planner_reply("Action: do something").ok);
    CHECK_FALSE(parse_planner_reply("Thought: only thinking").ok);
    CHECK_FALSE(parse_planner_reply("no structure at all").ok);
    CHECK_FALSE(parse_planner_reply("Thought: a\nAction: x\nAction: y").ok);
    CHECK_FALSE(parse_planner_reply("Thought: a\nAction: x\nThought: b\nAction: y").ok);
    CHECK_FALSE(parse_planner_reply("Thought: a\nAction:   ").ok);
}

TEST_CASE("plan_step repairs one malformed reply, then gives up") {
    SUBCASE("repair succeeds") {
        auto mock = llm::mock_provider(
            {llm::assistant_message("two actions\nAction: a\nAction: b"),
             llm::assistant_message("Thought: fixed\nAction: Pick up the lemon and place it in "
                                    "the trash.")});
        StepOutcome outcome =
            plan_step("instruction", {}, *mock, testsupport::prompts(), PlannerConfig{});
        REQUIRE(outcome.step.has_value());
        CHECK(outcome.llm_calls == 2);
        CHECK(outcome.step->thought == "fixed");
        // The retry conversation carries the bad reply and a reminder.
        auto requests = mock->seen_requests();
        REQUIRE(requests.size() == 2);
        CHECK(requests[1].messages.size() == requests[0].messages.size() + 2);
        CHECK(requests[1].messages.back().content.find("Thought:") != std::string::npos);
    }

    SUBCASE("second failure aborts") {
        auto mock = llm::mock_provider({llm::assistant_message("bad"),
                                        llm::assistant_message("still bad")});
        StepOutcome outcome =
            plan_step("instruction", {}, *mock, testsupport::prompts(), PlannerConfig{});
        CHECK_FALSE(outcome.step.has_value());
        CHECK(outcome.llm_calls == 2);
        CHECK(outcome.error.find("format error") != std::string::npos);
    }
}

TEST_CASE("planner prompt carries the instruction and the verbatim history") {
    std::vector<PlannerStep> history;
    PlannerStep s1;
    s1.thought = "first thought";
    s1.subtask = "Get the names of objects present in the environment";
    s1.observation = "bowl, home, trash";
    history.push_back(s1);
    PlannerStep s2;
    s2.thought = "second thought";
    s2.subtask = "Pick up the lemon and place it in the trash.";
    s2.observation = "The lemon was successfully picked";
    history.push_back(s2);

    auto messages = build_planner_messages("Clean the table.", history, testsupport::prompts());
    REQUIRE(messages.size() == 2);
    CHECK(messages[0].role == llm::Role::System);
    const std::string& user = messages[1].content;
    CHECK(user.find("Clean the table.") != std::string::npos);

    // History is serialized in order, verbatim.
    size_t p1 = user.find("Thought: first thought");
    size_t p2 = user.find("Action: Get the names of objects present in the environment");
    size_t p3 = user.find("Observation: bowl, home, trash");
    size_t p4 = user.find("Thought: second thought");
    size_t p5 = user.find("Observation: The lemon was successfully picked");
    REQUIRE(p1 != std::string::npos);
    REQUIRE(p5 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(p2 < p3);
    CHECK(p3 < p4);
    CHECK(p4 < p5);
}

TEST_CASE("run_task loops until Finish and collects observations") {
    auto mock = llm::mock_provider(
        {llm::assistant_message("Thought: list first\nAction: Get the names of objects present "
                                "in the environment"),
         llm::assistant_message("Thought: move lemon\nAction: Pick up the lemon and place it in "
                                "the trash."),
         llm::assistant_message("Thought: done\nAction: Finish[table clean]")});
    StubExecutor executor;
    TaskTrace trace = run_task("Clean up.", executor, *mock, testsupport::prompts());
    CHECK(trace.finished);
    CHECK_FALSE(trace.unfinished_budget);
    CHECK(trace.final_answer == "table clean");
    REQUIRE(trace.steps.size() == 3);
    CHECK(trace.steps[0].observation == "observation 1");
    CHECK(trace.steps[1].observation == "observation 2");
    CHECK(executor.subtasks.size() == 2);
    CHECK(trace.planner_llm_calls == 3);

    std::string transcript = trace.transcript();
    CHECK(transcript.find("Action: Finish[table clean]") != std::string::npos);
}

TEST_CASE("run_task: immediate Finish executes nothing") {
    auto mock = llm::mock_provider({llm::assistant_message("Thought: trivial\nAction: Finish[done]")});
    StubExecutor executor;
    TaskTrace trace = run_task("Do nothing.", executor, *mock, testsupport::prompts());
    CHECK(trace.finished);
    CHECK(executor.subtasks.empty());
}

TEST_CASE("run_task stops at the step budget and flags the trace unfinished") {
    std::vector<llm::ChatMessage> script;
    for (int i = 0; i < 25; ++i) {
        script.push_back(llm::assistant_message(
            "Thought: looping\nAction: Pick up the lemon and place it in the trash."));
    }
    auto mock = llm::mock_provider(script);
    StubExecutor executor;
    PlannerConfig config;
    config.max_steps = 20;
    TaskTrace trace = run_task("Loop forever.", executor, *mock, testsupport::prompts(), config);
    CHECK_FALSE(trace.finished);
    CHECK(trace.unfinished_budget);
    CHECK(trace.steps.size() == 20);
    CHECK(executor.subtasks.size() == 20);
    // Step budget bounds planner calls.
    CHECK(trace.planner_llm_calls <= config.max_steps + config.repair_retries);
}

TEST_CASE("run_task aborts with a format error after a failed repair") {
    auto mock = llm::mock_provider({llm::assistant_message("Thought: ok\nAction: Pick up the "
                                                           "lemon and place it in the trash."),
                                    llm::assistant_message("garbage"),
                                    llm::assistant_message("more garbage")});
    StubExecutor executor;
    TaskTrace trace = run_task("Break.", executor, *mock, testsupport::prompts());
    CHECK(trace.format_error);
    CHECK_FALSE(trace.finished);
    CHECK(trace.steps.size() == 1);  // the successful first step remains
    CHECK(executor.subtasks.size() == 1);
}

TEST_CASE("history monotonicity: the prompt at step k contains steps 0..k-1") {
    auto mock = llm::mock_provider(
        {llm::assistant_message("Thought: t0\nAction: Pick up the lemon and place it in the trash."),
         llm::assistant_message("Thought: t1\nAction: Pick up the peach and place it in the trash."),
         llm::assistant_message("Thought: t2\nAction: Finish[done]")});
    StubExecutor executor;
    run_task("Clean.", executor, *mock, testsupport::prompts());
    auto requests = mock->seen_requests();
    REQUIRE(requests.size() == 3);
    CHECK(requests[0].messages.back().content.find("Thought: t0") == std::string::npos);
    CHECK(requests[1].messages.back().content.find("Thought: t0") != std::string::npos);
    CHECK(requests[2].messages.back().content.find("Thought: t0") != std::string::npos);
    CHECK(requests[2].messages.back().content.find("Thought: t1") != std::string::npos);
    CHECK(requests[2].messages.back().content.find("observation 1") != std::string::npos);
}
