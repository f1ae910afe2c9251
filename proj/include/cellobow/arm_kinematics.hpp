#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include "cellobow/pose.hpp"

namespace cellobow {

struct KinematicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct JointLimitViolation : KinematicsError {
    using KinematicsError::KinematicsError;
};
struct NoConvergence : KinematicsError {
    using KinematicsError::KinematicsError;
};
struct BadArmModelFile : KinematicsError {
    using KinematicsError::KinematicsError;
};

using JointVector = Eigen::Matrix<double, 6, 1>;
using Jacobian = Eigen::Matrix<double, 6, 6>;

// Six-row table of standard Denavit-Hartenberg parameters plus joint
// limits. Row order: base, shoulder, elbow, wrist1, wrist2, wrist3.
struct ArmModel {
    struct Link {
        double twist = 0.0;        // alpha, radians
        double length = 0.0;       // a, meters
        double offset = 0.0;       // d, meters
        double angle_offset = 0.0; // theta added to the joint angle
        double limit_low = -2.0 * M_PI;
        double limit_high = 2.0 * M_PI;
    };
    std::array<Link, 6> links;

    bool withinLimits(const JointVector& q) const;
    void checkLimits(const JointVector& q) const; // throws JointLimitViolation
    JointVector clampToLimits(const JointVector& q) const;
};

// Parse the arm model config: six lines, each
// `twist length offset angle_offset limit_low limit_high`.
ArmModel parseArmModel(const std::string& text);
ArmModel loadArmModelFile(const std::string& path);

struct IkSettings {
    double damping = 0.01;
    double step_cap_rad = 0.2; // per-iteration joint step norm cap
    int max_iterations = 200;
    double position_tolerance_m = 1e-4;
    double rotation_tolerance_rad = 1e-3;
};

// TCP pose of the six-link chain. Throws JointLimitViolation.
Pose fk(const JointVector& q, const ArmModel& model);

// Geometric Jacobian at q: rows are (linear velocity; angular velocity)
// per unit joint rate.
Jacobian jacobian(const JointVector& q, const ArmModel& model);

// Damped least-squares inverse kinematics. Throws NoConvergence when the
// iteration cap is reached before both tolerances are met.
JointVector ik(const Pose& target, const JointVector& seed,
               const ArmModel& model, const IkSettings& settings = {});

// Joint provider used by the replay simulator: pose in, joints out.
using JointProvider = std::function<JointVector(const Pose&)>;

// All-zero joints regardless of pose; keeps logs schema-complete when no
// arm model is configured.
JointVector nullProvider(const Pose&);

} // namespace cellobow
