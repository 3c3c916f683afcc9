#include "robobench/world.hpp"

#include <algorithm>

#include "robobench/canonical.hpp"

namespace robobench {

std::optional<Relation> relation_from_string(std::string_view text) {
    if (text == "at") return Relation::At;
    if (text == "in") return Relation::In;
    if (text == "on_top_of") return Relation::OnTopOf;
    if (text == "left_of") return Relation::LeftOf;
    if (text == "right_of") return Relation::RightOf;
    if (text == "in_front_of") return Relation::InFrontOf;
    if (text == "behind") return Relation::Behind;
    return std::nullopt;
}

std::string relation_to_string(Relation relation) {
    switch (relation) {
        case Relation::At: return "at";
        case Relation::In: return "in";
        case Relation::OnTopOf: return "on_top_of";
        case Relation::LeftOf: return "left_of";
        case Relation::RightOf: return "right_of";
        case Relation::InFrontOf: return "in_front_of";
        case Relation::Behind: return "behind";
    }
    return "at";
}

const WorkspaceBounds& workspace_bounds() {
    static const WorkspaceBounds bounds{};
    return bounds;
}

Pose home_pose() {
    return Pose{{0.20, 0.0, 0.35}, top_down_orientation()};
}

ActionResult ActionResult::failure(std::string message) {
    return ActionResult{false, std::move(message), nullptr};
}

ActionResult ActionResult::success(std::string message, Json data) {
    return ActionResult{true, std::move(message), std::move(data)};
}

namespace {

Json attrs(std::initializer_list<std::pair<const char*, Json>> kv) {
    Json j = Json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

std::vector<EnvironmentLayout> make_builtin_layouts() {
    std::vector<EnvironmentLayout> envs;

    EnvironmentLayout kitchen;
    kitchen.env_id = 1;
    kitchen.name = "kitchen_utensils";
    kitchen.objects = {
        {"spoon", ObjectKind::Item, {0.30, 0.20, 0.02}, 0.0,
         attrs({{"material", "metal"}, {"weight_g", 30}, {"size_cm", 15}})},
        {"spatula", ObjectKind::Item, {0.30, -0.20, 0.02}, 0.0,
         attrs({{"material", "plastic"}, {"weight_g", 50}, {"size_cm", 30}})},
        {"coke", ObjectKind::Item, {0.45, 0.10, 0.05}, 0.0,
         attrs({{"material", "aluminum"}, {"weight_g", 330}, {"size_cm", 12}, {"calories", 139}})},
        {"basket", ObjectKind::Container, {0.45, -0.25, 0.04}, kContainerFootprint,
         attrs({{"material", "wicker"}, {"size_cm", 25}})},
    };
    envs.push_back(std::move(kitchen));

    EnvironmentLayout boxes;
    boxes.env_id = 2;
    boxes.name = "boxes";
    boxes.objects = {
        {"cardboard_box", ObjectKind::Item, {0.25, 0.25, 0.03}, 0.0,
         attrs({{"material", "cardboard"}, {"weight_g", 100}, {"size_cm", 20}})},
        {"wooden_box", ObjectKind::Item, {0.25, 0.00, 0.03}, 0.0,
         attrs({{"material", "wood"}, {"weight_g", 300}, {"size_cm", 18}})},
        {"metal_box", ObjectKind::Item, {0.25, -0.25, 0.03}, 0.0,
         attrs({{"material", "metal"}, {"weight_g", 500}, {"size_cm", 16}})},
        {"container", ObjectKind::Container, {0.48, 0.00, 0.05}, kContainerFootprint,
         attrs({{"material", "plastic"}, {"size_cm", 35}})},
    };
    envs.push_back(std::move(boxes));

    EnvironmentLayout fruits;
    fruits.env_id = 3;
    fruits.name = "fruits";
    fruits.objects = {
        {"strawberry", ObjectKind::Item, {0.25, 0.30, 0.02}, 0.0,
         attrs({{"material", "organic"}, {"sourness", 3}, {"size_cm", 2.5}, {"calories", 32},
                {"weight_g", 15}})},
        {"plum", ObjectKind::Item, {0.25, 0.10, 0.03}, 0.0,
         attrs({{"material", "organic"}, {"sourness", 4}, {"size_cm", 4}, {"calories", 46},
                {"weight_g", 60}})},
        {"lemon", ObjectKind::Item, {0.25, -0.10, 0.03}, 0.0,
         attrs({{"material", "organic"}, {"sourness", 9}, {"size_cm", 6}, {"calories", 29},
                {"weight_g", 100}})},
        {"peach", ObjectKind::Item, {0.25, -0.30, 0.04}, 0.0,
         attrs({{"material", "organic"}, {"sourness", 2}, {"size_cm", 7.5}, {"calories", 39},
                {"weight_g", 150}})},
        {"bowl", ObjectKind::Container, {0.45, 0.20, 0.04}, kContainerFootprint,
         attrs({{"material", "ceramic"}, {"size_cm", 14}})},
        {"trash", ObjectKind::Container, {0.45, -0.20, 0.06}, kContainerFootprint,
         attrs({{"material", "plastic"}, {"size_cm", 25}})},
    };
    envs.push_back(std::move(fruits));

    return envs;
}

}  // namespace

const EnvironmentLayout& builtin_environment(int env_id) {
    static const std::vector<EnvironmentLayout> layouts = make_builtin_layouts();
    for (const auto& layout : layouts) {
        if (layout.env_id == env_id) return layout;
    }
    throw ConfigError("unknown environment id " + std::to_string(env_id) +
                      " (expected 1, 2, or 3)");
}

World World::load_environment(int env_id) {
    return from_layout(builtin_environment(env_id));
}

World World::from_layout(const EnvironmentLayout& layout) {
    World w;
    w.env_id_ = layout.env_id;
    for (const auto& obj : layout.objects) {
        ObjectState state;
        state.name = obj.name;
        state.pose = Pose{obj.position, Quat{}};
        state.kind = obj.kind;
        state.footprint_radius = obj.kind == ObjectKind::Container ? obj.footprint_radius : 0.0;
        w.objects_.emplace(obj.name, std::move(state));
    }
    w.robot_.home = home_pose();
    w.robot_.ee_pose = w.robot_.home;
    return w;
}

const ObjectState* World::find_object(const std::string& name) const {
    auto it = objects_.find(name);
    return it == objects_.end() ? nullptr : &it->second;
}

std::vector<std::string> World::trace_lines() const {
    std::vector<std::string> lines;
    lines.reserve(trace_.size());
    for (const auto& rec : trace_) {
        lines.push_back(render_trace_line(rec.action, rec.args, rec.ok));
    }
    return lines;
}

ActionResult World::record(const std::string& action, Json args, ActionResult result) {
    trace_.push_back({action, std::move(args), result.ok, static_cast<int>(trace_.size())});
    return result;
}

std::optional<std::string> World::containing_container(const Vec3& position) const {
    std::optional<std::string> best;
    double best_dist = 0.0;
    for (const auto& [name, obj] : objects_) {
        if (obj.kind != ObjectKind::Container) continue;
        double d = obj.pose.position.distance_xy(position);
        if (d <= obj.footprint_radius && (!best || d < best_dist)) {
            best = name;
            best_dist = d;
        }
    }
    return best;
}

ActionResult World::pick(const std::string& object_name) {
    Json args;
    args["object_name"] = object_name;
    auto it = objects_.find(object_name);
    if (it == objects_.end()) {
        return record("pick", std::move(args),
                      ActionResult::failure("Object " + object_name + " not found"));
    }
    if (robot_.held) {
        return record("pick", std::move(args),
                      ActionResult::failure("Gripper already holding " + *robot_.held));
    }
    if (it->second.kind == ObjectKind::Container) {
        return record("pick", std::move(args),
                      ActionResult::failure("Object " + object_name + " is not graspable"));
    }
    // Reach the object, then attach it; the object keeps its pose and the
    // end effector snaps to it, so pick followed by place at the original
    // pose is an exact round trip.
    robot_.ee_pose = it->second.pose;
    robot_.held = object_name;
    it->second.contained_in.reset();
    return record("pick", std::move(args),
                  ActionResult::success("The " + object_name + " was successfully picked"));
}

ActionResult World::place(const Pose& target) {
    Json args;
    args["pose"] = pose_to_json(target);
    if (!robot_.held) {
        return record("place", std::move(args), ActionResult::failure("Gripper is empty"));
    }
    if (!workspace_bounds().contains(target.position)) {
        return record("place", std::move(args), ActionResult::failure("Pose out of workspace"));
    }
    std::string name = *robot_.held;
    ObjectState& obj = objects_.at(name);
    robot_.ee_pose = target;
    obj.pose = target;
    obj.contained_in = containing_container(target.position);
    robot_.held.reset();
    std::string message = "The " + name + " was successfully placed";
    if (obj.contained_in) {
        message += " in the " + *obj.contained_in;
    }
    return record("place", std::move(args), ActionResult::success(std::move(message)));
}

ActionResult World::move_to(const Pose& target) {
    Json args;
    args["pose"] = pose_to_json(target);
    if (!workspace_bounds().contains(target.position)) {
        return record("move_to", std::move(args), ActionResult::failure("Pose out of workspace"));
    }
    robot_.ee_pose = target;
    if (robot_.held) {
        objects_.at(*robot_.held).pose = target;
    }
    return record("move_to", std::move(args), ActionResult::success("Moved to target pose"));
}

ActionResult World::move_to_home_pos() {
    robot_.ee_pose = robot_.home;
    if (robot_.held) {
        objects_.at(*robot_.held).pose = robot_.home;
    }
    return record("move_to_home_pos", Json::object(),
                  ActionResult::success("Moved to home position"));
}

ActionResult World::get_objects() {
    Json list = Json::array();
    for (const auto& [name, obj] : objects_) {  // std::map iterates lexicographically
        if (obj.kind != ObjectKind::Item) continue;
        Json entry;
        entry["name"] = name;
        entry["position"] = {obj.pose.position.x, obj.pose.position.y, obj.pose.position.z};
        list.push_back(std::move(entry));
    }
    std::string message = "Found " + std::to_string(list.size()) + " objects";
    return record("get_objects", Json::object(),
                  ActionResult::success(std::move(message), std::move(list)));
}

ActionResult World::get_reference_names() {
    std::vector<std::string> names;
    for (const auto& [name, obj] : objects_) {
        if (obj.kind == ObjectKind::Container) names.push_back(name);
    }
    names.push_back("home");
    std::sort(names.begin(), names.end());
    Json list = Json::array();
    for (auto& n : names) list.push_back(n);
    std::string message = "Found " + std::to_string(list.size()) + " reference names";
    return record("get_reference_names", Json::object(),
                  ActionResult::success(std::move(message), std::move(list)));
}

ActionResult World::compute_grasp(const std::string& object_name) {
    Json args;
    args["object_name"] = object_name;
    auto it = objects_.find(object_name);
    if (it == objects_.end()) {
        return record("compute_grasp", std::move(args),
                      ActionResult::failure("Object " + object_name + " not found"));
    }
    if (it->second.kind == ObjectKind::Container) {
        return record("compute_grasp", std::move(args),
                      ActionResult::failure("Object " + object_name + " is not graspable"));
    }
    Pose grasp{it->second.pose.position, top_down_orientation()};
    return record("compute_grasp", std::move(args),
                  ActionResult::success("Grasp pose computed for the " + object_name,
                                        pose_to_json(grasp)));
}

ActionResult World::get_pose(const std::string& reference, const std::string& relation) {
    Json args;
    args["reference"] = reference;
    args["relation"] = relation;

    auto rel = relation_from_string(relation);
    if (!rel) {
        return record("get_pose", std::move(args),
                      ActionResult::failure("Unknown relation " + relation));
    }

    Vec3 base;
    if (reference == "home") {
        base = robot_.home.position;
    } else {
        auto it = objects_.find(reference);
        if (it == objects_.end()) {
            return record("get_pose", std::move(args),
                          ActionResult::failure("Reference " + reference + " not found"));
        }
        base = it->second.pose.position;
    }

    Vec3 offset{};
    switch (*rel) {
        case Relation::At:
        case Relation::In: break;
        case Relation::OnTopOf: offset.z = kRelationOffsetZ; break;
        case Relation::LeftOf: offset.y = kRelationOffsetXY; break;
        case Relation::RightOf: offset.y = -kRelationOffsetXY; break;
        case Relation::InFrontOf: offset.x = -kRelationOffsetXY; break;
        case Relation::Behind: offset.x = kRelationOffsetXY; break;
    }
    Pose pose{base + offset, top_down_orientation()};
    return record("get_pose", std::move(args),
                  ActionResult::success("Pose computed for " + reference + " (" + relation + ")",
                                        pose_to_json(pose)));
}

}  // namespace robobench
