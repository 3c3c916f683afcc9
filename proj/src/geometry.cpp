#include "robobench/geometry.hpp"

namespace robobench {

namespace {

constexpr double kEps = 1e-12;

double checked_number(const Json& v, const char* what) {
    if (!v.is_number()) {
        throw SchemaError(std::string(what) + " must be a number");
    }
    double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw SchemaError(std::string(what) + " must be finite");
    }
    return d;
}

}  // namespace

bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
}

Quat::Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
    double n = norm();
    if (!std::isfinite(n) || n < kEps) {
        throw SchemaError("orientation must be a finite, non-zero quaternion");
    }
    w /= n;
    x /= n;
    y /= n;
    z /= n;
}

bool operator==(const Quat& a, const Quat& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

bool operator==(const Pose& a, const Pose& b) {
    return a.position == b.position && a.orientation == b.orientation;
}

Quat top_down_orientation() {
    return Quat(0.0, 0.0, 1.0, 0.0);
}

Json pose_to_json(const Pose& pose) {
    Json j;
    j["position"] = {pose.position.x, pose.position.y, pose.position.z};
    j["orientation"] = {pose.orientation.w, pose.orientation.x, pose.orientation.y,
                        pose.orientation.z};
    return j;
}

Pose pose_from_json(const Json& value) {
    if (!value.is_object()) {
        throw SchemaError("pose must be an object with \"position\" and \"orientation\"");
    }
    for (const auto& item : value.items()) {
        if (item.key() != "position" && item.key() != "orientation") {
            throw SchemaError("unexpected pose field \"" + item.key() + "\"");
        }
    }
    if (!value.contains("position")) {
        throw SchemaError("pose is missing \"position\"");
    }
    const Json& pos = value.at("position");
    if (!pos.is_array() || pos.size() != 3) {
        throw SchemaError("pose position must be an array of 3 numbers");
    }
    Pose pose;
    pose.position = {checked_number(pos[0], "pose position"),
                     checked_number(pos[1], "pose position"),
                     checked_number(pos[2], "pose position")};
    if (value.contains("orientation")) {
        const Json& ori = value.at("orientation");
        if (!ori.is_array() || ori.size() != 4) {
            throw SchemaError("pose orientation must be an array of 4 numbers");
        }
        pose.orientation =
            Quat(checked_number(ori[0], "pose orientation"), checked_number(ori[1], "pose orientation"),
                 checked_number(ori[2], "pose orientation"), checked_number(ori[3], "pose orientation"));
    } else {
        pose.orientation = top_down_orientation();
    }
    return pose;
}

}  // namespace robobench
