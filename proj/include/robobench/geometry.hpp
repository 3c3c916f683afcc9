#pragma once

#include <cmath>
#include <string>

#include "robobench/common.hpp"

namespace robobench {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double distance_to(const Vec3& o) const { return (*this - o).norm(); }
    double distance_xy(const Vec3& o) const { return std::hypot(x - o.x, y - o.y); }
};

bool operator==(const Vec3& a, const Vec3& b);

/// Unit quaternion, (w, x, y, z) order. Normalized on construction; a
/// zero-norm input is rejected with SchemaError.
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_);

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

bool operator==(const Quat& a, const Quat& b);

struct Pose {
    Vec3 position;
    Quat orientation;
};

bool operator==(const Pose& a, const Pose& b);

/// Gripper-down orientation used for placeholder grasp and placement poses:
/// a half-turn about the +y axis.
Quat top_down_orientation();

/// Wire format: {"position": [x, y, z], "orientation": [w, x, y, z]}.
/// Orientation may be omitted, in which case the top-down constant is used.
Json pose_to_json(const Pose& pose);
Pose pose_from_json(const Json& value);  // throws SchemaError

}  // namespace robobench
