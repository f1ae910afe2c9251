#include "cellobow/arm_kinematics.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <sstream>

namespace cellobow {

namespace {

// Standard DH link transform: Rz(theta) Tz(d) Tx(a) Rx(alpha).
Eigen::Matrix4d linkTransform(const ArmModel::Link& link, double q) {
    const double theta = q + link.angle_offset;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(link.twist), sa = std::sin(link.twist);
    Eigen::Matrix4d T;
    T << ct, -st * ca,  st * sa, link.length * ct,
         st,  ct * ca, -ct * sa, link.length * st,
          0,       sa,       ca, link.offset,
          0,        0,        0, 1;
    return T;
}

} // namespace

bool ArmModel::withinLimits(const JointVector& q) const {
    for (int i = 0; i < 6; ++i)
        if (q[i] < links[i].limit_low || q[i] > links[i].limit_high)
            return false;
    return true;
}

void ArmModel::checkLimits(const JointVector& q) const {
    for (int i = 0; i < 6; ++i)
        if (q[i] < links[i].limit_low || q[i] > links[i].limit_high)
            throw JointLimitViolation("joint " + std::to_string(i) + " = " +
                                      std::to_string(q[i]) + " outside [" +
                                      std::to_string(links[i].limit_low) + ", " +
                                      std::to_string(links[i].limit_high) + "]");
}

JointVector ArmModel::clampToLimits(const JointVector& q) const {
    JointVector out = q;
    for (int i = 0; i < 6; ++i)
        out[i] = std::clamp(out[i], links[i].limit_low, links[i].limit_high);
    return out;
}

ArmModel parseArmModel(const std::string& text) {
    ArmModel model;
    std::istringstream in(text);
    std::string line;
    int lineno = 0, row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream words(line);
        ArmModel::Link link;
        if (!(words >> link.twist)) continue; // blank/comment line
        if (!(words >> link.length >> link.offset >> link.angle_offset >>
              link.limit_low >> link.limit_high))
            throw BadArmModelFile("line " + std::to_string(lineno) +
                                  ": expected 6 values");
        if (link.limit_low >= link.limit_high)
            throw BadArmModelFile("line " + std::to_string(lineno) +
                                  ": limits must satisfy low < high");
        if (row >= 6)
            throw BadArmModelFile("more than 6 link rows");
        model.links[static_cast<std::size_t>(row++)] = link;
    }
    if (row != 6)
        throw BadArmModelFile("expected 6 link rows, found " +
                              std::to_string(row));
    return model;
}

ArmModel loadArmModelFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadArmModelFile("cannot open arm model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parseArmModel(ss.str());
}

Pose fk(const JointVector& q, const ArmModel& model) {
    model.checkLimits(q);
    Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 6; ++i)
        T *= linkTransform(model.links[static_cast<std::size_t>(i)], q[i]);
    return {T.block<3, 1>(0, 3),
            rotationMatrixToVector(T.block<3, 3>(0, 0))};
}

Jacobian jacobian(const JointVector& q, const ArmModel& model) {
    std::array<Eigen::Matrix4d, 7> frames;
    frames[0] = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 6; ++i)
        frames[static_cast<std::size_t>(i) + 1] =
            frames[static_cast<std::size_t>(i)] *
            linkTransform(model.links[static_cast<std::size_t>(i)], q[i]);
    const Vec3 p_end = frames[6].block<3, 1>(0, 3);

    Jacobian J;
    for (int i = 0; i < 6; ++i) {
        const Vec3 z = frames[static_cast<std::size_t>(i)].block<3, 1>(0, 2);
        const Vec3 p = frames[static_cast<std::size_t>(i)].block<3, 1>(0, 3);
        J.block<3, 1>(0, i) = z.cross(p_end - p);
        J.block<3, 1>(3, i) = z;
    }
    return J;
}

JointVector ik(const Pose& target, const JointVector& seed,
               const ArmModel& model, const IkSettings& settings) {
    if (!target.isFinite()) throw KinematicsError("non-finite IK target");
    model.checkLimits(seed);

    const Mat3 R_target = rotationVectorToMatrix(target.rotation);
    JointVector q = seed;
    for (int iter = 0; iter < settings.max_iterations; ++iter) {
        Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
        for (int i = 0; i < 6; ++i)
            T *= linkTransform(model.links[static_cast<std::size_t>(i)], q[i]);
        const Vec3 pos = T.block<3, 1>(0, 3);
        const Mat3 R = T.block<3, 3>(0, 0);

        const Vec3 pos_err = target.position - pos;
        const Vec3 rot_err = rotationMatrixToVector(R_target * R.transpose());
        if (pos_err.norm() <= settings.position_tolerance_m &&
            rot_err.norm() <= settings.rotation_tolerance_rad)
            return q;

        Vec6 err;
        err << pos_err, rot_err;
        const Jacobian J = jacobian(q, model);
        const Jacobian JJt = J * J.transpose() +
                             settings.damping * settings.damping *
                                 Jacobian::Identity();
        JointVector dq = J.transpose() * JJt.ldlt().solve(err);
        const double step = dq.norm();
        if (step > settings.step_cap_rad)
            dq *= settings.step_cap_rad / step;
        q = model.clampToLimits(q + dq);
    }
    throw NoConvergence("inverse kinematics did not converge in " +
                        std::to_string(settings.max_iterations) + " iterations");
}

JointVector nullProvider(const Pose&) { return JointVector::Zero(); }

} // namespace cellobow
