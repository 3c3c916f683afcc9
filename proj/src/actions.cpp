#include "robobench/actions.hpp"

namespace robobench {

namespace {

std::vector<ActionSpec> make_specs() {
    const std::string pose_doc =
        "a pose object {\"position\": [x, y, z], \"orientation\": [w, x, y, z]}";
    return {
        {"pick",
         "Pick up a graspable object by name. Fails if the object is unknown, the gripper is "
         "already holding something, or the target is a container.",
         {{"object_name", ParamType::String, "name of the object to pick"}},
         "confirmation message"},
        {"place",
         "Place the currently held object at a target pose. If the pose lies within a "
         "container's footprint the object ends up inside that container.",
         {{"pose", ParamType::Pose, pose_doc}},
         "confirmation message"},
        {"move_to",
         "Move the end effector to a target pose. A held object moves with the gripper.",
         {{"pose", ParamType::Pose, pose_doc}},
         "confirmation message"},
        {"move_to_home_pos",
         "Move the end effector back to the home position.",
         {},
         "confirmation message"},
        {"get_objects",
         "List the manipulable objects in the environment with their current positions.",
         {},
         "list of {\"name\", \"position\"} entries, sorted by name"},
        {"get_reference_names",
         "List the reference names that can be used as placement destinations: all containers "
         "plus \"home\".",
         {},
         "list of names"},
        {"compute_grasp",
         "Compute a grasp pose for an object: its current position with a fixed top-down "
         "orientation.",
         {{"object_name", ParamType::String, "name of the object to grasp"}},
         "pose object"},
        {"get_pose",
         "Compute a pose relative to a reference (an object name or \"home\") using a spatial "
         "relation.",
         {{"reference", ParamType::String, "object name or \"home\""},
          {"relation", ParamType::Relation,
           "one of: at, in, on_top_of, left_of, right_of, in_front_of, behind"}},
         "pose object"},
    };
}

Json pose_schema() {
    Json position = {{"type", "array"},
                     {"items", {{"type", "number"}}},
                     {"minItems", 3},
                     {"maxItems", 3},
                     {"description", "[x, y, z] in meters"}};
    Json orientation = {{"type", "array"},
                        {"items", {{"type", "number"}}},
                        {"minItems", 4},
                        {"maxItems", 4},
                        {"description", "[w, x, y, z] unit quaternion"}};
    Json schema;
    schema["type"] = "object";
    schema["properties"] = {{"position", position}, {"orientation", orientation}};
    schema["required"] = Json::array({"position"});
    return schema;
}

const char* const kRelationValues[] = {"at",       "in",          "on_top_of", "left_of",
                                       "right_of", "in_front_of", "behind"};

std::string type_name(const Json& v) {
    switch (v.type()) {
        case Json::value_t::string: return "string";
        case Json::value_t::array: return "array";
        case Json::value_t::object: return "object";
        case Json::value_t::boolean: return "boolean";
        case Json::value_t::null: return "null";
        default: return v.is_number() ? "number" : "value";
    }
}

}  // namespace

const std::vector<ActionSpec>& action_specs() {
    static const std::vector<ActionSpec> specs = make_specs();
    return specs;
}

const ActionSpec* find_action(const std::string& name) {
    for (const auto& spec : action_specs()) {
        if (spec.name == name) return &spec;
    }
    return nullptr;
}

Json action_parameters_schema(const ActionSpec& spec) {
    Json properties = Json::object();
    Json required = Json::array();
    for (const auto& param : spec.params) {
        switch (param.type) {
            case ParamType::String:
                properties[param.name] = {{"type", "string"}, {"description", param.description}};
                break;
            case ParamType::Pose: {
                Json schema = pose_schema();
                schema["description"] = param.description;
                properties[param.name] = std::move(schema);
                break;
            }
            case ParamType::Relation: {
                Json values = Json::array();
                for (const char* v : kRelationValues) values.push_back(v);
                properties[param.name] = {{"type", "string"},
                                          {"enum", std::move(values)},
                                          {"description", param.description}};
                break;
            }
        }
        required.push_back(param.name);
    }
    Json schema;
    schema["type"] = "object";
    schema["properties"] = std::move(properties);
    schema["required"] = std::move(required);
    return schema;
}

std::vector<llm::ToolSchema> build_tool_schemas() {
    std::vector<llm::ToolSchema> tools;
    for (const auto& spec : action_specs()) {
        tools.push_back({spec.name, spec.description, action_parameters_schema(spec)});
    }
    return tools;
}

Json tool_schemas_json() {
    Json out = Json::array();
    for (const auto& tool : build_tool_schemas()) {
        Json t;
        t["type"] = "function";
        t["function"] = {{"name", tool.name},
                         {"description", tool.description},
                         {"parameters", tool.parameters}};
        out.push_back(std::move(t));
    }
    return out;
}

std::string action_docs_text() {
    std::string out;
    for (const auto& spec : action_specs()) {
        out += spec.name + "(";
        bool first = true;
        for (const auto& param : spec.params) {
            if (!first) out += ", ";
            first = false;
            out += param.name;
        }
        out += ")\n  " + spec.description + "\n";
        for (const auto& param : spec.params) {
            out += "  - " + param.name + ": " + param.description + "\n";
        }
        out += "  Returns: " + spec.returns_doc + "\n\n";
    }
    return out;
}

Json DispatchOutcome::to_json() const {
    Json j;
    switch (status) {
        case Status::Ok:
            j["ok"] = result.ok;
            j["message"] = result.message;
            if (!result.data.is_null()) {
                j["data"] = result.data;
            }
            break;
        case Status::SchemaError:
        case Status::UnknownAction:
            j["ok"] = false;
            j["message"] = error;
            break;
    }
    return j;
}

DispatchOutcome dispatch_action(World& world, const std::string& action, const Json& args) {
    const ActionSpec* spec = find_action(action);
    if (spec == nullptr) {
        return {DispatchOutcome::Status::UnknownAction, {}, "Unknown action " + action};
    }
    if (!args.is_object() && !args.is_null()) {
        return {DispatchOutcome::Status::SchemaError, {},
                "Arguments for " + action + " must be a JSON object"};
    }

    auto schema_error = [&](const std::string& detail) {
        return DispatchOutcome{DispatchOutcome::Status::SchemaError, {},
                               "Invalid arguments for " + action + ": " + detail};
    };

    if (args.is_object()) {
        for (const auto& item : args.items()) {
            bool known = false;
            for (const auto& param : spec->params) {
                if (param.name == item.key()) {
                    known = true;
                    break;
                }
            }
            if (!known) {
                return schema_error("unexpected argument \"" + item.key() + "\"");
            }
        }
    }
    for (const auto& param : spec->params) {
        if (!args.is_object() || !args.contains(param.name)) {
            return schema_error("missing required argument \"" + param.name + "\"");
        }
    }

    auto require_string = [&](const std::string& key) -> std::string {
        const Json& v = args.at(key);
        if (!v.is_string()) {
            throw SchemaError("argument \"" + key + "\" must be a string, got " + type_name(v));
        }
        return v.get<std::string>();
    };

    try {
        ActionResult result;
        if (action == "pick") {
            result = world.pick(require_string("object_name"));
        } else if (action == "place") {
            result = world.place(pose_from_json(args.at("pose")));
        } else if (action == "move_to") {
            result = world.move_to(pose_from_json(args.at("pose")));
        } else if (action == "move_to_home_pos") {
            result = world.move_to_home_pos();
        } else if (action == "get_objects") {
            result = world.get_objects();
        } else if (action == "get_reference_names") {
            result = world.get_reference_names();
        } else if (action == "compute_grasp") {
            result = world.compute_grasp(require_string("object_name"));
        } else if (action == "get_pose") {
            result = world.get_pose(require_string("reference"), require_string("relation"));
        }
        return {DispatchOutcome::Status::Ok, std::move(result), ""};
    } catch (const SchemaError& e) {
        return schema_error(e.what());
    }
}

}  // namespace robobench
