#include "cellobow/bow_geometry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cellobow {

StringPrimitives::StringPrimitives(const std::array<Waypoints, 4>& waypoints,
                                   const OutOffset& out)
    : waypoints_(waypoints), out_(out) {
    for (std::size_t i = 0; i < 4; ++i) {
        const auto s = static_cast<StringId>(i);
        const auto& w = waypoints_[i];
        if (!w.frog.isFinite() || !w.tip.isFinite())
            throw BadPrimitivesFile(std::string("non-finite waypoint for string ") +
                                    stringName(s));
        if (w.frog.rotation != w.tip.rotation)
            throw BadPrimitivesFile(
                std::string("frog and tip rotations differ for string ") +
                stringName(s));
        if ((w.tip.position - w.frog.position).norm() <= 0.05)
            throw BadPrimitivesFile(
                std::string("frog-tip distance <= 0.05 m for string ") +
                stringName(s));
    }
    if (out_.delta.norm() <= 0.0)
        throw BadPrimitivesFile("out offset must have positive norm");
}

StringPrimitives parsePrimitives(const std::string& text) {
    std::array<std::array<bool, 2>, 4> seen{};
    std::array<StringPrimitives::Waypoints, 4> wps;
    OutOffset out;
    bool out_seen = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int waypoint_lines = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream words(line);
        std::string first;
        if (!(words >> first)) continue;

        if (first == "out_offset") {
            double x, y, z;
            if (!(words >> x >> y >> z))
                throw BadPrimitivesFile("line " + std::to_string(lineno) +
                                        ": out_offset needs 3 values");
            if (out_seen)
                throw BadPrimitivesFile("duplicate out_offset line");
            out.delta = Vec3(x, y, z);
            out_seen = true;
            continue;
        }

        auto sid = stringFromName(first);
        if (!sid)
            throw BadPrimitivesFile("line " + std::to_string(lineno) +
                                    ": unknown string '" + first + "'");
        std::string which;
        Vec6 v;
        if (!(words >> which >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5]))
            throw BadPrimitivesFile("line " + std::to_string(lineno) +
                                    ": expected '<string> <frog|tip> x y z rx ry rz'");
        int col;
        if (which == "frog")
            col = 0;
        else if (which == "tip")
            col = 1;
        else
            throw BadPrimitivesFile("line " + std::to_string(lineno) +
                                    ": expected 'frog' or 'tip', got '" + which + "'");
        const auto idx = static_cast<std::size_t>(*sid);
        if (seen[idx][static_cast<std::size_t>(col)])
            throw BadPrimitivesFile("line " + std::to_string(lineno) +
                                    ": duplicate waypoint");
        seen[idx][static_cast<std::size_t>(col)] = true;
        (col == 0 ? wps[idx].frog : wps[idx].tip) = Pose::fromVector(v);
        ++waypoint_lines;
    }
    if (waypoint_lines != 8)
        throw BadPrimitivesFile("expected exactly 8 waypoint lines, found " +
                                std::to_string(waypoint_lines));
    return StringPrimitives(wps, out);
}

StringPrimitives loadPrimitivesFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw BadPrimitivesFile("cannot open primitives file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parsePrimitives(ss.str());
}

Pose bowPose(const StringPrimitives& prims, StringId s, double u, Bowing b) {
    if (u < -1e-9 || u > 1.0 + 1e-9)
        throw FractionOutOfRange("bow fraction " + std::to_string(u) +
                                 " outside [0, 1]");
    u = std::clamp(u, 0.0, 1.0);
    const Pose& start = (b == Bowing::Down) ? prims.frog(s) : prims.tip(s);
    const Pose& end = (b == Bowing::Down) ? prims.tip(s) : prims.frog(s);
    return {(1.0 - u) * start.position + u * end.position, prims.rotation(s)};
}

double bowLength(const StringPrimitives& prims, StringId s) {
    return (prims.tip(s).position - prims.frog(s).position).norm();
}

double fractionFromFrog(const StringPrimitives& prims, StringId s,
                        const Pose& pose, double tolerance) {
    const Vec3& f = prims.frog(s).position;
    const Vec3 line = prims.tip(s).position - f;
    const double len = line.norm();
    const Vec3 rel = pose.position - f;
    const double along = rel.dot(line) / len;
    const double t = std::clamp(along / len, 0.0, 1.0);
    const double dist = (rel - t * line).norm();
    if (dist > tolerance)
        throw OffBowLine("pose is " + std::to_string(dist) +
                         " m off the " + stringName(s) + " string bow line");
    return std::clamp(rel.norm() / len, 0.0, 1.0);
}

Pose projectCrossing(const StringPrimitives& prims, StringId from,
                     StringId to, const Pose& curr) {
    const double u = fractionFromFrog(prims, from, curr);
    const double d_proj = u * bowLength(prims, to);
    const Vec3& f = prims.frog(to).position;
    const Vec3 dir =
        (prims.tip(to).position - f) / bowLength(prims, to);
    return {f + dir * d_proj, prims.rotation(to)};
}

Pose applyOutOffset(const Pose& pose, const OutOffset& off) {
    return {pose.position + off.delta, pose.rotation};
}

} // namespace cellobow
