#include <doctest.h>

#include "robobench/world.hpp"

using namespace robobench;

TEST_CASE("load_environment populates the declared object sets") {
    World env3 = World::load_environment(3);
    REQUIRE(env3.objects().size() == 6);
    for (const char* name : {"strawberry", "plum", "lemon", "peach", "bowl", "trash"}) {
        CHECK(env3.find_object(name) != nullptr);
    }
    CHECK(env3.find_object("bowl")->kind == ObjectKind::Container);
    CHECK(env3.find_object("trash")->kind == ObjectKind::Container);
    CHECK(env3.find_object("lemon")->kind == ObjectKind::Item);

    World env1 = World::load_environment(1);
    CHECK(env1.objects().size() == 4);
    CHECK_FALSE(env1.robot().held.has_value());
    CHECK(env1.trace().empty());
    CHECK(env1.robot().ee_pose == home_pose());

    World env2 = World::load_environment(2);
    CHECK(env2.objects().size() == 4);

    CHECK_THROWS_AS(World::load_environment(4), ConfigError);
    CHECK_THROWS_AS(World::load_environment(0), ConfigError);
}

TEST_CASE("layouts keep objects separated and in bounds") {
    for (int env_id : {1, 2, 3}) {
        const EnvironmentLayout& layout = builtin_environment(env_id);
        for (size_t i = 0; i < layout.objects.size(); ++i) {
            CHECK(workspace_bounds().contains(layout.objects[i].position));
            for (size_t j = i + 1; j < layout.objects.size(); ++j) {
                double d = layout.objects[i].position.distance_to(layout.objects[j].position);
                INFO(layout.objects[i].name << " vs " << layout.objects[j].name);
                CHECK(d >= 0.15);
            }
        }
    }
}

TEST_CASE("pick: success and the three failure modes") {
    World w = World::load_environment(3);

    ActionResult ok = w.pick("lemon");
    CHECK(ok.ok);
    CHECK(ok.message == "The lemon was successfully picked");
    CHECK(w.robot().held == "lemon");
    CHECK(w.find_object("lemon")->pose == w.robot().ee_pose);

    ActionResult missing = World::load_environment(3).pick("orange");
    CHECK_FALSE(missing.ok);
    CHECK(missing.message == "Object orange not found");
    CHECK(missing.data.is_null());

    ActionResult occupied = w.pick("peach");
    CHECK_FALSE(occupied.ok);
    CHECK(occupied.message == "Gripper already holding lemon");

    World w2 = World::load_environment(3);
    ActionResult container = w2.pick("trash");
    CHECK_FALSE(container.ok);
    CHECK(container.message == "Object trash is not graspable");
}

TEST_CASE("pick clears containment") {
    World w = World::load_environment(3);
    w.pick("lemon");
    ActionResult placed = w.place(w.find_object("trash")->pose);
    REQUIRE(placed.ok);
    CHECK(w.find_object("lemon")->contained_in == "trash");
    w.pick("lemon");
    CHECK_FALSE(w.find_object("lemon")->contained_in.has_value());
}

TEST_CASE("place: containment by footprint against the layout") {
    World w = World::load_environment(3);
    REQUIRE(w.pick("lemon").ok);
    Pose trash_pose = w.find_object("trash")->pose;
    ActionResult placed = w.place(trash_pose);
    REQUIRE(placed.ok);
    CHECK(placed.message == "The lemon was successfully placed in the trash");
    CHECK(w.find_object("lemon")->contained_in == "trash");
    CHECK_FALSE(w.robot().held.has_value());
    CHECK(w.find_object("lemon")->pose.position.distance_to(trash_pose.position) < 1e-9);

    SUBCASE("outside every footprint leaves contained_in empty") {
        World w2 = World::load_environment(3);
        REQUIRE(w2.pick("peach").ok);
        ActionResult free_place = w2.place(Pose{{0.10, 0.0, 0.05}, top_down_orientation()});
        REQUIRE(free_place.ok);
        CHECK(free_place.message == "The peach was successfully placed");
        CHECK_FALSE(w2.find_object("peach")->contained_in.has_value());
    }
}

TEST_CASE("place failures: empty gripper and out-of-workspace") {
    World w = World::load_environment(3);
    ActionResult empty = w.place(home_pose());
    CHECK_FALSE(empty.ok);
    CHECK(empty.message == "Gripper is empty");

    REQUIRE(w.pick("lemon").ok);
    ActionResult oob = w.place(Pose{{0.0, 0.0, -1.0}, top_down_orientation()});
    CHECK_FALSE(oob.ok);
    CHECK(oob.message == "Pose out of workspace");
    CHECK(w.robot().held == "lemon");  // failure changes nothing
}

TEST_CASE("move_to: placeholder kinematics") {
    World w = World::load_environment(1);
    ActionResult home = w.move_to(home_pose());
    CHECK(home.ok);
    CHECK(w.robot().ee_pose == home_pose());

    ActionResult below = w.move_to(Pose{{0.2, 0.0, -1.0}, top_down_orientation()});
    CHECK_FALSE(below.ok);
    CHECK(below.message == "Pose out of workspace");

    SUBCASE("held object follows the gripper") {
        World w3 = World::load_environment(3);
        REQUIRE(w3.pick("lemon").ok);
        Pose target{{0.5, 0.3, 0.2}, top_down_orientation()};
        REQUIRE(w3.move_to(target).ok);
        CHECK(w3.find_object("lemon")->pose == target);
        CHECK(w3.robot().ee_pose == target);
    }
}

TEST_CASE("move_to_home_pos is equivalent to move_to(home)") {
    World w = World::load_environment(2);
    REQUIRE(w.move_to(Pose{{0.5, 0.4, 0.5}, top_down_orientation()}).ok);
    ActionResult result = w.move_to_home_pos();
    CHECK(result.ok);
    CHECK(w.robot().ee_pose == home_pose());

    SUBCASE("fresh world: ok, no state change") {
        World fresh = World::load_environment(2);
        auto before = fresh.objects();
        REQUIRE(fresh.move_to_home_pos().ok);
        CHECK(fresh.robot().ee_pose == home_pose());
        CHECK(fresh.objects().size() == before.size());
    }

    SUBCASE("held object follows home") {
        World w2 = World::load_environment(3);
        REQUIRE(w2.pick("plum").ok);
        REQUIRE(w2.move_to_home_pos().ok);
        CHECK(w2.find_object("plum")->pose == home_pose());
    }
}

TEST_CASE("get_objects lists items lexicographically, excluding containers") {
    World w = World::load_environment(1);
    ActionResult result = w.get_objects();
    REQUIRE(result.ok);
    REQUIRE(result.data.is_array());
    REQUIRE(result.data.size() == 3);
    CHECK(result.data[0]["name"] == "coke");
    CHECK(result.data[1]["name"] == "spatula");
    CHECK(result.data[2]["name"] == "spoon");
    CHECK(result.data[0]["position"].size() == 3);

    SUBCASE("positions reflect moves") {
        World w3 = World::load_environment(3);
        w3.pick("lemon");
        Pose trash_pose = w3.find_object("trash")->pose;
        w3.place(trash_pose);
        ActionResult after = w3.get_objects();
        for (const auto& entry : after.data) {
            if (entry["name"] == "lemon") {
                CHECK(entry["position"][0].get<double>() == doctest::Approx(trash_pose.position.x));
                CHECK(entry["position"][1].get<double>() == doctest::Approx(trash_pose.position.y));
            }
        }
    }

    SUBCASE("deterministic across repeated calls") {
        World w3 = World::load_environment(3);
        Json first = w3.get_objects().data;
        Json second = w3.get_objects().data;
        CHECK(first == second);
    }
}

TEST_CASE("get_reference_names: containers plus home, sorted") {
    World env3 = World::load_environment(3);
    Json names = env3.get_reference_names().data;
    REQUIRE(names.is_array());
    CHECK(names == Json::array({"bowl", "home", "trash"}));

    World env2 = World::load_environment(2);
    CHECK(env2.get_reference_names().data == Json::array({"container", "home"}));

    SUBCASE("stable across actions") {
        env3.pick("lemon");
        env3.place(env3.find_object("trash")->pose);
        CHECK(env3.get_reference_names().data == Json::array({"bowl", "home", "trash"}));
    }
}

TEST_CASE("compute_grasp: placeholder grasp at the object with top-down orientation") {
    World w = World::load_environment(3);
    ActionResult grasp = w.compute_grasp("lemon");
    REQUIRE(grasp.ok);
    Pose pose = pose_from_json(grasp.data);
    CHECK(pose.position == w.find_object("lemon")->pose.position);
    CHECK(pose.orientation == top_down_orientation());

    CHECK_FALSE(w.compute_grasp("orange").ok);
    CHECK(w.compute_grasp("orange").message == "Object orange not found");
    CHECK_FALSE(w.compute_grasp("bowl").ok);
}

TEST_CASE("get_pose: relation offsets") {
    World env3 = World::load_environment(3);
    Pose in_trash = pose_from_json(env3.get_pose("trash", "in").data);
    CHECK(in_trash.position == env3.find_object("trash")->pose.position);

    World env1 = World::load_environment(1);
    Vec3 coke = env1.find_object("coke")->pose.position;
    Pose left = pose_from_json(env1.get_pose("coke", "left_of").data);
    CHECK(left.position.x == doctest::Approx(coke.x));
    CHECK(left.position.y == doctest::Approx(coke.y + kRelationOffsetXY));
    CHECK(left.position.z == doctest::Approx(coke.z));

    CHECK_FALSE(env1.get_pose("fork", "in").ok);
    CHECK(env1.get_pose("fork", "in").message == "Reference fork not found");
    CHECK_FALSE(env1.get_pose("coke", "under").ok);
    CHECK(env1.get_pose("coke", "under").message == "Unknown relation under");

    SUBCASE("home is a valid reference") {
        Pose at_home = pose_from_json(env1.get_pose("home", "at").data);
        CHECK(at_home.position == home_pose().position);
    }
}

TEST_CASE("every action appends exactly one record, success or failure") {
    World w = World::load_environment(3);
    w.pick("lemon");
    w.pick("lemon");  // fails: already holding
    w.get_objects();
    w.place(Pose{{0.0, 0.0, -5.0}, top_down_orientation()});  // fails: bounds
    w.move_to_home_pos();
    REQUIRE(w.trace().size() == 5);
    for (size_t i = 0; i < w.trace().size(); ++i) {
        CHECK(w.trace()[i].index == static_cast<int>(i));
    }
    CHECK(w.trace()[0].ok);
    CHECK_FALSE(w.trace()[1].ok);
    CHECK(w.trace()[2].ok);
    CHECK_FALSE(w.trace()[3].ok);
    CHECK(w.trace()[4].ok);

    auto lines = w.trace_lines();
    CHECK(lines[0] == "pick(object_name=\"lemon\") -> ok");
    CHECK(lines[1] == "pick(object_name=\"lemon\") -> fail");
    CHECK(lines[2] == "get_objects() -> ok");
    CHECK(lines[4] == "move_to_home_pos() -> ok");
}

TEST_CASE("round trip: pick then place at the original pose restores state") {
    World w = World::load_environment(3);
    Pose original = w.find_object("lemon")->pose;
    REQUIRE(w.pick("lemon").ok);
    REQUIRE(w.place(original).ok);
    CHECK(w.find_object("lemon")->pose.position.distance_to(original.position) < 1e-9);
    CHECK_FALSE(w.robot().held.has_value());
}

TEST_CASE("quaternions normalize on construction") {
    Quat q(2.0, 0.0, 0.0, 0.0);
    CHECK(q.w == doctest::Approx(1.0));
    CHECK(std::abs(q.norm() - 1.0) < 1e-9);
    CHECK_THROWS_AS(Quat(0.0, 0.0, 0.0, 0.0), SchemaError);
}

TEST_CASE("pose JSON round trip and validation") {
    Pose pose{{0.1, -0.2, 0.3}, top_down_orientation()};
    Pose back = pose_from_json(pose_to_json(pose));
    CHECK(back == pose);

    CHECK_THROWS_AS(pose_from_json(Json{{"position", {1, 2}}}), SchemaError);
    CHECK_THROWS_AS(pose_from_json(Json{{"pos", {1, 2, 3}}}), SchemaError);
    CHECK_THROWS_AS(pose_from_json(Json("not a pose")), SchemaError);
    Json nan_pose{{"position", Json::array({0.0, 0.0, 0.0})}};
    nan_pose["position"][0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pose_from_json(nan_pose), SchemaError);

    // Orientation defaults to the top-down constant when omitted.
    Pose defaulted = pose_from_json(Json{{"position", {0.2, 0.0, 0.1}}});
    CHECK(defaulted.orientation == top_down_orientation());
}
