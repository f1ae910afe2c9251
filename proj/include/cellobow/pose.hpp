#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cellobow {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

// Cartesian pose: position in meters, rotation as an axis-angle
// rotation vector in radians.
struct Pose {
    Vec3 position{Vec3::Zero()};
    Vec3 rotation{Vec3::Zero()};

    Pose() = default;
    Pose(const Vec3& pos, const Vec3& rot) : position(pos), rotation(rot) {}

    static Pose fromVector(const Vec6& v) {
        return {v.head<3>(), v.tail<3>()};
    }
    Vec6 toVector() const {
        Vec6 v;
        v << position, rotation;
        return v;
    }

    bool isFinite() const {
        return position.allFinite() && rotation.allFinite();
    }
};

inline bool operator==(const Pose& a, const Pose& b) {
    return a.position == b.position && a.rotation == b.rotation;
}
inline bool operator!=(const Pose& a, const Pose& b) { return !(a == b); }

// Rotation vector -> rotation matrix. Uses a second-order series below
// 1e-7 rad to stay smooth through the zero-angle limit.
Mat3 rotationVectorToMatrix(const Vec3& r);

// Rotation matrix -> rotation vector. Handles angles near 0 and near pi.
Vec3 rotationMatrixToVector(const Mat3& R);

// Componentwise linear interpolation of position and rotation vector.
// Rotation components are interpolated linearly on the axis-angle vector,
// not slerped; see replay docs for the trade-off.
inline Pose lerpPose(const Pose& a, const Pose& b, double t) {
    return {a.position + t * (b.position - a.position),
            a.rotation + t * (b.rotation - a.rotation)};
}

} // namespace cellobow
