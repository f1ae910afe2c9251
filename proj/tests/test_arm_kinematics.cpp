#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cellobow/arm_kinematics.hpp"

using namespace cellobow;

namespace {

ArmModel identityModel() {
    ArmModel m;
    return m; // all parameters zero, generous limits
}

ArmModel bundledModel() {
    return loadArmModelFile(std::string(CELLOBOW_SOURCE_DIR) + "/data/arm6.cfg");
}

JointVector randomJoints(std::mt19937& rng, double range = 1.2) {
    std::uniform_real_distribution<double> uni(-range, range);
    JointVector q;
    for (int i = 0; i < 6; ++i) q[i] = uni(rng);
    return q;
}

} // namespace

TEST_CASE("fk: identity model at zero joints gives the identity pose") {
    const Pose pose = fk(JointVector::Zero(), identityModel());
    CHECK(pose.position.norm() == 0.0);
    CHECK(pose.rotation.norm() == 0.0);
}

TEST_CASE("fk: single planar link rotates on a circle") {
    ArmModel m = identityModel();
    m.links[0].length = 0.5;
    for (double theta : {0.0, 0.3, 1.0, -0.7}) {
        JointVector q = JointVector::Zero();
        q[0] = theta;
        const Pose pose = fk(q, m);
        CHECK(pose.position.x() == doctest::Approx(0.5 * std::cos(theta)));
        CHECK(pose.position.y() == doctest::Approx(0.5 * std::sin(theta)));
        CHECK(pose.position.z() == doctest::Approx(0.0));
    }
}

TEST_CASE("fk: bundled model matches an independently computed chain") {
    auto m = bundledModel();
    const Pose home = fk(JointVector::Zero(), m);
    CHECK(home.position.x() == doctest::Approx(1.30).epsilon(1e-12));
    CHECK(home.position.y() == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(home.position.z() == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(home.rotation.x() == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(home.rotation.y() == doctest::Approx(0.0));
    CHECK(home.rotation.z() == doctest::Approx(0.0));

    JointVector q;
    q << 0.1, 0.2, -0.3, 0.4, -0.5, 0.6;
    const Pose pose = fk(q, m);
    CHECK(pose.position.x() == doctest::Approx(1.381233137336).epsilon(1e-10));
    CHECK(pose.position.y() == doctest::Approx(-0.100366447084).epsilon(1e-10));
    CHECK(pose.position.z() == doctest::Approx(0.178696096298).epsilon(1e-10));
    CHECK(pose.rotation.x() == doctest::Approx(1.524418666424).epsilon(1e-10));
    CHECK(pose.rotation.y() == doctest::Approx(-0.217983878205).epsilon(1e-10));
    CHECK(pose.rotation.z() == doctest::Approx(1.175142435262).epsilon(1e-10));
}

TEST_CASE("fk: joint limit violations are rejected") {
    ArmModel m = bundledModel();
    m.links[2].limit_low = -1.0;
    m.links[2].limit_high = 1.0;
    JointVector q = JointVector::Zero();
    q[2] = 1.5;
    CHECK_THROWS_AS(fk(q, m), JointLimitViolation);
}

TEST_CASE("jacobian matches central finite differences") {
    auto m = bundledModel();
    std::mt19937 rng(99);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const JointVector q = randomJoints(rng);
        const Jacobian J = jacobian(q, m);
        const Mat3 R0 = rotationVectorToMatrix(fk(q, m).rotation);
        for (int j = 0; j < 6; ++j) {
            JointVector qp = q, qm = q;
            qp[j] += h;
            qm[j] -= h;
            const Pose pp = fk(qp, m), pm = fk(qm, m);
            const Vec3 dpos = (pp.position - pm.position) / (2 * h);
            // angular velocity from the relative rotation of the two
            // perturbed frames
            const Mat3 Rp = rotationVectorToMatrix(pp.rotation);
            const Mat3 Rm = rotationVectorToMatrix(pm.rotation);
            const Vec3 domega =
                rotationMatrixToVector(Rp * Rm.transpose()) / (2 * h);
            (void)R0;
            const double pos_scale = std::max(J.block<3, 1>(0, j).norm(), 1.0);
            const double rot_scale = std::max(J.block<3, 1>(3, j).norm(), 1.0);
            CHECK((J.block<3, 1>(0, j) - dpos).norm() / pos_scale <= 1e-4);
            CHECK((J.block<3, 1>(3, j) - domega).norm() / rot_scale <= 1e-4);
        }
    }
}

TEST_CASE("ik: fixed point returns the seed") {
    auto m = bundledModel();
    JointVector q;
    q << 0.3, -0.6, 1.0, -0.4, 0.5, 0.2;
    const Pose target = fk(q, m);
    const JointVector solved = ik(target, q, m);
    const Pose reached = fk(solved, m);
    CHECK((reached.position - target.position).norm() <= 1e-4);
}

TEST_CASE("ik: converges from a perturbed seed") {
    auto m = bundledModel();
    std::mt19937 rng(1234);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (int trial = 0; trial < 50; ++trial) {
        const JointVector q = randomJoints(rng);
        const Pose target = fk(q, m);
        JointVector seed = q;
        for (int i = 0; i < 6; ++i) seed[i] += noise(rng);
        const JointVector solved = ik(target, seed, m);
        const Pose reached = fk(solved, m);
        CHECK((reached.position - target.position).norm() <= 1e-4);
        const Mat3 Rr = rotationVectorToMatrix(reached.rotation);
        const Mat3 Rt = rotationVectorToMatrix(target.rotation);
        CHECK(rotationMatrixToVector(Rt * Rr.transpose()).norm() <= 1e-3);
    }
}

TEST_CASE("ik: unreachable target fails with NoConvergence") {
    auto m = bundledModel();
    Pose target;
    target.position = Vec3(5.0, 0.0, 0.0); // far outside the workspace
    CHECK_THROWS_AS(ik(target, JointVector::Zero(), m), NoConvergence);
}

TEST_CASE("null provider") {
    Pose any;
    any.position = Vec3(1, 2, 3);
    CHECK(nullProvider(any) == JointVector::Zero());
    CHECK(nullProvider(any) == nullProvider(any));
}

TEST_CASE("arm model config parsing") {
    CHECK_THROWS_AS(parseArmModel(""), BadArmModelFile);
    CHECK_THROWS_AS(parseArmModel("0 0 0 0 -1 1\n"), BadArmModelFile);
    CHECK_THROWS_AS(parseArmModel("0 0 0 0 1 -1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n"
                                  "0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n"),
                    BadArmModelFile);
    auto m = parseArmModel("# comment\n"
                           "0.1 0.2 0.3 0.4 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n"
                           "0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n");
    CHECK(m.links[0].twist == 0.1);
    CHECK(m.links[0].length == 0.2);
    CHECK(m.links[0].offset == 0.3);
    CHECK(m.links[0].angle_offset == 0.4);
}
