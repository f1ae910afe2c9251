#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "cellobow/pose.hpp"
#include "cellobow/score_ir.hpp"

namespace cellobow {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FractionOutOfRange : GeometryError {
    using GeometryError::GeometryError;
};
struct OffBowLine : GeometryError {
    using GeometryError::GeometryError;
};
struct BadPrimitivesFile : GeometryError {
    using GeometryError::GeometryError;
};

// Retreat displacement applied before string crossings. Pure translation.
struct OutOffset {
    Vec3 delta{0.1, 0.0, 0.5};
};

// Frog/tip waypoint pair per string. Rotation is constant along each
// string's bow line, so a single rotation vector is stored per pair.
class StringPrimitives {
public:
    struct Waypoints {
        Pose frog;
        Pose tip;
    };

    // Validates: frog/tip rotations identical per string, frog-tip
    // positional distance > 0.05 m. Throws BadPrimitivesFile.
    StringPrimitives(const std::array<Waypoints, 4>& waypoints,
                     const OutOffset& out = {});

    const Pose& frog(StringId s) const { return at(s).frog; }
    const Pose& tip(StringId s) const { return at(s).tip; }
    const Vec3& rotation(StringId s) const { return at(s).frog.rotation; }
    const OutOffset& outOffset() const { return out_; }

private:
    const Waypoints& at(StringId s) const {
        return waypoints_[static_cast<std::size_t>(s)];
    }
    std::array<Waypoints, 4> waypoints_;
    OutOffset out_;
};

// Parse the primitives config: `<string> <frog|tip> x y z rx ry rz`,
// exactly 8 non-comment lines, optional `out_offset x y z` line.
StringPrimitives parsePrimitives(const std::string& text);
StringPrimitives loadPrimitivesFile(const std::string& path);

// Pose at fraction u along the bow line of string s. Down bows run
// frog->tip, up bows tip->frog. Rotation is the string's constant
// rotation, copied exactly. Throws FractionOutOfRange outside
// [-1e-9, 1+1e-9]; values inside that band are clamped.
Pose bowPose(const StringPrimitives& prims, StringId s, double u, Bowing b);

// Euclidean frog-to-tip distance (positional).
double bowLength(const StringPrimitives& prims, StringId s);

// Fraction along the frog->tip line of the given pose, clamped to [0,1].
// Throws OffBowLine when the position is more than `tolerance` meters
// from the segment.
double fractionFromFrog(const StringPrimitives& prims, StringId s,
                        const Pose& pose, double tolerance = 1e-6);

// Crossing target: the pose on string `to` at the same frog-fraction as
// `curr` has on string `from`, with `to`'s rotation.
Pose projectCrossing(const StringPrimitives& prims, StringId from,
                     StringId to, const Pose& curr);

// Translate by the offset; rotation unchanged.
Pose applyOutOffset(const Pose& pose, const OutOffset& off);

} // namespace cellobow
