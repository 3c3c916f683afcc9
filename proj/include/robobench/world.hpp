#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robobench/geometry.hpp"

namespace robobench {

enum class ObjectKind { Item, Container };

enum class Relation { At, In, OnTopOf, LeftOf, RightOf, InFrontOf, Behind };

std::optional<Relation> relation_from_string(std::string_view text);
std::string relation_to_string(Relation relation);

/// Horizontal and vertical offsets applied by get_pose's spatial relations.
inline constexpr double kRelationOffsetXY = 0.10;
inline constexpr double kRelationOffsetZ = 0.05;

/// Footprint radius shared by every container.
inline constexpr double kContainerFootprint = 0.08;

/// Axis-aligned reachable box. Robot base at the origin, +x away from the
/// robot, +y to its left, +z up. Targets outside are rejected; there is no
/// kinematic feasibility check beyond this.
struct WorkspaceBounds {
    double x_min = -0.1, x_max = 0.6;
    double y_min = -0.5, y_max = 0.5;
    double z_min = 0.0, z_max = 0.6;

    bool contains(const Vec3& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max && p.z >= z_min &&
               p.z <= z_max;
    }
};

const WorkspaceBounds& workspace_bounds();

/// End-effector rest pose shared by all environments.
Pose home_pose();

struct ObjectState {
    std::string name;
    Pose pose;
    ObjectKind kind = ObjectKind::Item;
    std::optional<std::string> contained_in;
    double footprint_radius = 0.0;  // containers only
};

struct RobotState {
    std::optional<std::string> held;
    Pose ee_pose;
    Pose home;
};

struct ActionResult {
    bool ok = false;
    std::string message;
    Json data;  // null when absent; ok == false implies null

    static ActionResult failure(std::string message);
    static ActionResult success(std::string message, Json data = nullptr);
};

struct ActionRecord {
    std::string action;
    Json args;  // normalized, declaration order
    bool ok = false;
    int index = 0;
};

/// Declarative description of one environment: names, kinds, initial
/// positions, container footprints, and the per-object attribute table used
/// by the high-level-reasoning instructions.
struct LayoutObject {
    std::string name;
    ObjectKind kind = ObjectKind::Item;
    Vec3 position;
    double footprint_radius = 0.0;
    Json attributes;  // object; may be empty
};

struct EnvironmentLayout {
    int env_id = 0;
    std::string name;
    std::vector<LayoutObject> objects;
};

/// The three fixed benchmark environments. Layouts keep every pair of
/// objects at least 0.15 m apart and inside the workspace:
///   1 kitchen utensils: spoon, spatula, coke + basket
///   2 boxes:            cardboard_box, wooden_box, metal_box + container
///   3 fruits:           strawberry, plum, lemon, peach + bowl, trash
/// Throws ConfigError for any other id.
const EnvironmentLayout& builtin_environment(int env_id);

/// Single-owner kinematic state machine over the eight actions. Placeholder
/// semantics: any well-formed, in-bounds target succeeds. Every action
/// appends exactly one ActionRecord, success or failure, and a failed action
/// changes nothing else.
class World {
public:
    static World load_environment(int env_id);  // throws ConfigError
    static World from_layout(const EnvironmentLayout& layout);

    int env_id() const { return env_id_; }
    const std::map<std::string, ObjectState>& objects() const { return objects_; }
    const ObjectState* find_object(const std::string& name) const;
    const RobotState& robot() const { return robot_; }
    const std::vector<ActionRecord>& trace() const { return trace_; }
    std::vector<std::string> trace_lines() const;

    ActionResult pick(const std::string& object_name);
    ActionResult place(const Pose& target);
    ActionResult move_to(const Pose& target);
    ActionResult move_to_home_pos();
    ActionResult get_objects();
    ActionResult get_reference_names();
    ActionResult compute_grasp(const std::string& object_name);
    ActionResult get_pose(const std::string& reference, const std::string& relation);

private:
    ActionResult record(const std::string& action, Json args, ActionResult result);
    std::optional<std::string> containing_container(const Vec3& position) const;

    int env_id_ = 0;
    std::map<std::string, ObjectState> objects_;
    RobotState robot_;
    std::vector<ActionRecord> trace_;
};

}  // namespace robobench
