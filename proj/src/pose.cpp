#include "cellobow/pose.hpp"

#include <cmath>

namespace cellobow {

Mat3 rotationVectorToMatrix(const Vec3& r) {
    const double theta = r.norm();
    Mat3 K;
    K << 0, -r.z(), r.y(),
         r.z(), 0, -r.x(),
         -r.y(), r.x(), 0;
    if (theta < 1e-7) {
        // sin(t)/t ~ 1 - t^2/6, (1-cos(t))/t^2 ~ 1/2 - t^2/24
        const double t2 = theta * theta;
        return Mat3::Identity() + (1.0 - t2 / 6.0) * K +
               (0.5 - t2 / 24.0) * (K * K);
    }
    const Mat3 Kn = K / theta;
    return Mat3::Identity() + std::sin(theta) * Kn +
           (1.0 - std::cos(theta)) * (Kn * Kn);
}

Vec3 rotationMatrixToVector(const Mat3& R) {
    Eigen::AngleAxisd aa(R);
    return aa.angle() * aa.axis();
}

} // namespace cellobow
