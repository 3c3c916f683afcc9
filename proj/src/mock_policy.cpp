#include "robobench/mock_policy.hpp"

#include "robobench/actions.hpp"
#include "robobench/script.hpp"

namespace robobench::bench {

std::string mode_to_string(Mode mode) {
    return mode == Mode::Cap ? "cap" : "tap";
}

std::vector<ManipulationPair> extract_pairs(const std::vector<std::string>& ground_truth) {
    std::vector<ManipulationPair> pairs;
    ManipulationPair pending;
    bool have_pick = false;
    for (const auto& line : ground_truth) {
        auto parsed = script::parse_call_line(line);
        if (std::holds_alternative<script::ParseError>(parsed)) {
            throw ConfigError("ground truth line does not parse: " + line);
        }
        const script::Expr& call = std::get<script::Expr>(parsed);
        if (call.str == "pick") {
            if (have_pick || call.names.empty() ||
                call.children[0].kind != script::Expr::Kind::StringLit) {
                throw ConfigError("unexpected pick in ground truth: " + line);
            }
            pending = {};
            pending.object_name = call.children[0].str;
            have_pick = true;
        } else if (call.str == "place") {
            if (!have_pick || call.names.empty() ||
                call.children[0].kind != script::Expr::Kind::Call ||
                call.children[0].str != "get_pose") {
                throw ConfigError("expected place(pose=get_pose(...)) in ground truth: " + line);
            }
            const script::Expr& pose_call = call.children[0];
            for (size_t i = 0; i < pose_call.names.size(); ++i) {
                if (pose_call.children[i].kind != script::Expr::Kind::StringLit) {
                    throw ConfigError("get_pose arguments must be literals: " + line);
                }
                if (pose_call.names[i] == "reference") {
                    pending.reference = pose_call.children[i].str;
                } else if (pose_call.names[i] == "relation") {
                    pending.relation = pose_call.children[i].str;
                }
            }
            if (pending.reference.empty() || pending.relation.empty()) {
                throw ConfigError("get_pose is missing reference or relation: " + line);
            }
            pairs.push_back(pending);
            have_pick = false;
        } else {
            throw ConfigError("unsupported ground truth action for scripting: " + line);
        }
    }
    if (have_pick) {
        throw ConfigError("ground truth ends with an unmatched pick");
    }
    return pairs;
}

std::string subtask_phrase(const ManipulationPair& pair) {
    std::string destination;
    if (pair.reference == "home") {
        destination = "the home position";
    } else {
        destination = "the " + pair.reference;
    }
    std::string relation_phrase;
    if (pair.relation == "in") {
        relation_phrase = "in " + destination;
    } else if (pair.relation == "at") {
        relation_phrase = "at " + destination;
    } else if (pair.relation == "on_top_of") {
        relation_phrase = "on top of " + destination;
    } else if (pair.relation == "left_of") {
        relation_phrase = "to the left of " + destination;
    } else if (pair.relation == "right_of") {
        relation_phrase = "to the right of " + destination;
    } else if (pair.relation == "in_front_of") {
        relation_phrase = "in front of " + destination;
    } else if (pair.relation == "behind") {
        relation_phrase = "behind " + destination;
    } else {
        relation_phrase = pair.relation + " " + destination;
    }
    return "Pick up the " + pair.object_name + " and place it " + relation_phrase + ".";
}

MockRunScripts make_perfect_scripts(const TaskInstance& instance, Mode mode) {
    MockRunScripts scripts;
    std::vector<ManipulationPair> pairs = extract_pairs(instance.ground_truth);

    for (const auto& pair : pairs) {
        scripts.planner.push_back(llm::assistant_message(
            "Thought: The " + pair.object_name + " is next; I will move it where requested.\n" +
            "Action: " + subtask_phrase(pair)));
    }
    scripts.planner.push_back(llm::assistant_message(
        "Thought: Every requested object has been handled.\nAction: Finish[All requested objects "
        "were moved.]"));

    if (mode == Mode::Cap) {
        for (const auto& pair : pairs) {
            std::string program = "pick(object_name=\"" + pair.object_name + "\")\n" +
                                  "place(pose=get_pose(reference=\"" + pair.reference +
                                  "\", relation=\"" + pair.relation + "\"))\n";
            scripts.executor.push_back(llm::assistant_message("```\n" + program + "```"));
        }
        return scripts;
    }

    // TaP: replay against a scratch world to resolve the pose literal each
    // place call needs.
    World scratch = World::load_environment(instance.env_id);
    for (const auto& pair : pairs) {
        scripts.executor.push_back(
            llm::assistant_tool_call("pick", Json{{"object_name", pair.object_name}}));
        ActionResult picked = scratch.pick(pair.object_name);
        if (!picked.ok) {
            throw ConfigError("perfect-script replay failed: " + picked.message);
        }
        scripts.executor.push_back(llm::assistant_tool_call(
            "get_pose", Json{{"reference", pair.reference}, {"relation", pair.relation}}));
        ActionResult pose = scratch.get_pose(pair.reference, pair.relation);
        if (!pose.ok) {
            throw ConfigError("perfect-script replay failed: " + pose.message);
        }
        scripts.executor.push_back(llm::assistant_tool_call("place", Json{{"pose", pose.data}}));
        ActionResult placed = scratch.place(pose_from_json(pose.data));
        if (!placed.ok) {
            throw ConfigError("perfect-script replay failed: " + placed.message);
        }
        scripts.executor.push_back(llm::assistant_message(placed.message + "."));
    }
    return scripts;
}

}  // namespace robobench::bench
