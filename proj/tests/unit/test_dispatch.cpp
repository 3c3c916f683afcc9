#include <doctest.h>

#include "robobench/actions.hpp"

using namespace robobench;

TEST_CASE("dispatch validates argument schemas before touching the world") {
    World world = World::load_environment(3);

    SUBCASE("unknown action") {
        auto outcome = dispatch_action(world, "fly", Json::object());
        CHECK(outcome.status == DispatchOutcome::Status::UnknownAction);
        CHECK(world.trace().empty());
    }

    SUBCASE("wrong key") {
        auto outcome = dispatch_action(world, "pick", Json{{"object", "lemon"}});
        CHECK(outcome.status == DispatchOutcome::Status::SchemaError);
        CHECK(outcome.error.find("unexpected argument") != std::string::npos);
        CHECK(world.trace().empty());  // schema failures leave no record
    }

    SUBCASE("missing required argument") {
        auto outcome = dispatch_action(world, "pick", Json::object());
        CHECK(outcome.status == DispatchOutcome::Status::SchemaError);
        CHECK(outcome.error.find("object_name") != std::string::npos);
    }

    SUBCASE("wrong value type") {
        auto outcome = dispatch_action(world, "pick", Json{{"object_name", 42}});
        CHECK(outcome.status == DispatchOutcome::Status::SchemaError);
    }

    SUBCASE("malformed pose payload") {
        auto outcome = dispatch_action(world, "move_to", Json{{"pose", Json{{"position", {1, 2}}}}});
        CHECK(outcome.status == DispatchOutcome::Status::SchemaError);
    }

    SUBCASE("extra argument on a no-arg action") {
        auto outcome = dispatch_action(world, "get_objects", Json{{"x", 1}});
        CHECK(outcome.status == DispatchOutcome::Status::SchemaError);
    }
}

TEST_CASE("dispatch separates schema errors from in-domain failures") {
    World world = World::load_environment(3);
    auto not_found = dispatch_action(world, "pick", Json{{"object_name", "orange"}});
    CHECK(not_found.status == DispatchOutcome::Status::Ok);  // reached the sim
    CHECK_FALSE(not_found.result.ok);
    CHECK(not_found.result.message == "Object orange not found");
    CHECK(world.trace().size() == 1);  // in-domain failures are recorded

    auto ok = dispatch_action(world, "pick", Json{{"object_name", "lemon"}});
    CHECK(ok.status == DispatchOutcome::Status::Ok);
    CHECK(ok.result.ok);
    CHECK(world.trace().size() == 2);

    // Unknown relation is an in-domain failure, not a schema error.
    auto bad_relation =
        dispatch_action(world, "get_pose", Json{{"reference", "trash"}, {"relation", "below"}});
    CHECK(bad_relation.status == DispatchOutcome::Status::Ok);
    CHECK_FALSE(bad_relation.result.ok);
}

TEST_CASE("dispatch envelope serialization") {
    World world = World::load_environment(3);
    auto outcome = dispatch_action(world, "get_reference_names", Json::object());
    Json envelope = outcome.to_json();
    CHECK(envelope["ok"] == true);
    CHECK(envelope["data"] == Json::array({"bowl", "home", "trash"}));

    auto fail = dispatch_action(world, "pick", Json{{"object_name", "nope"}});
    Json fail_envelope = fail.to_json();
    CHECK(fail_envelope["ok"] == false);
    CHECK_FALSE(fail_envelope.contains("data"));
}

TEST_CASE("tool schemas cover the eight actions") {
    auto tools = build_tool_schemas();
    REQUIRE(tools.size() == 8);
    std::vector<std::string> names;
    for (const auto& tool : tools) {
        names.push_back(tool.name);
        CHECK(tool.parameters["type"] == "object");
        CHECK_FALSE(tool.description.empty());
    }
    CHECK(names == std::vector<std::string>{"pick", "place", "move_to", "move_to_home_pos",
                                            "get_objects", "get_reference_names", "compute_grasp",
                                            "get_pose"});

    const auto* pick = find_action("pick");
    REQUIRE(pick != nullptr);
    Json schema = action_parameters_schema(*pick);
    CHECK(schema["required"] == Json::array({"object_name"}));

    const auto* get_pose = find_action("get_pose");
    Json pose_schema = action_parameters_schema(*get_pose);
    CHECK(pose_schema["properties"]["relation"]["enum"].size() == 7);

    Json dump = tool_schemas_json();
    REQUIRE(dump.size() == 8);
    CHECK(dump[0]["type"] == "function");
    CHECK(dump[0]["function"]["name"] == "pick");
}

TEST_CASE("action docs render every signature") {
    std::string docs = action_docs_text();
    for (const auto& spec : action_specs()) {
        CHECK(docs.find(spec.name + "(") != std::string::npos);
    }
    CHECK(docs.find("object_name") != std::string::npos);
    CHECK(docs.find("Returns:") != std::string::npos);
}
