#include "cellobow/replay_sim.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cellobow {

namespace {

// Snap near-integer quotients so the row-count law holds when dt divides
// the total duration exactly in real arithmetic.
int sampleCount(double total, double dt) {
    const double q = total / dt;
    const double r = std::round(q);
    const int n = (std::abs(q - r) < 1e-6) ? static_cast<int>(r)
                                           : static_cast<int>(std::ceil(q));
    return n + 1;
}

double distanceToLine(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 d = (b - a).normalized();
    const Vec3 rel = p - a;
    return (rel - rel.dot(d) * d).norm();
}

} // namespace

std::vector<TrajectorySample> simulate(
    const MotionProgram& program, const SimulateOptions& opts,
    const JointProvider& provider, std::vector<std::string>* provider_notes) {
    if (opts.dt <= 0.0) throw PlannerError("sampling timestep must be positive");
    if (program.commands.empty()) throw PlannerError("empty motion program");

    const std::size_t ncmd = program.commands.size();
    std::vector<double> starts(ncmd);
    std::vector<Pose> start_poses(ncmd);
    double t0 = 0.0;
    Pose pose = program.start;
    for (std::size_t k = 0; k < ncmd; ++k) {
        starts[k] = t0;
        start_poses[k] = pose;
        t0 += program.commands[k].duration_sec;
        pose = program.commands[k].target;
    }
    const double total = program.total_duration_sec;

    const int n = sampleCount(total, opts.dt);
    std::vector<TrajectorySample> samples;
    samples.reserve(static_cast<std::size_t>(n));

    std::size_t k = 0;
    std::size_t prev_k = SIZE_MAX;
    for (int i = 0; i < n; ++i) {
        const double t = std::min(i * opts.dt, total);
        while (k + 1 < ncmd && t >= starts[k + 1] - 1e-9) ++k;
        const MotionCommand& cmd = program.commands[k];

        TrajectorySample s;
        s.time_elapsed_sec = t;
        s.timestamp_robot = opts.epoch + t;
        s.event_flag = (k != prev_k) ? 1 : 0;
        prev_k = k;
        s.event_label = cmd.label;
        s.current_event_type = kindName(cmd.kind);
        s.current_note_number = cmd.note_index;
        s.current_note_name = cmd.note_name;
        s.current_string = cmd.string_name;
        s.current_bowing = cmd.bowing;
        const double local = t - starts[k];
        s.remaining_duration_sec = std::max(cmd.duration_sec - local, 0.0);
        const double frac =
            cmd.duration_sec > 0.0 ? std::min(local / cmd.duration_sec, 1.0) : 1.0;
        s.tcp = lerpPose(start_poses[k], cmd.target, frac);
        try {
            s.joints = provider(s.tcp);
        } catch (const NoConvergence& e) {
            s.joints = JointVector::Zero();
            if (provider_notes)
                provider_notes->push_back("sample " + std::to_string(i) + " (t=" +
                                          std::to_string(t) + "): " + e.what() +
                                          "; joints zeroed");
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    out << (pass() ? "PASS" : "FAIL")
        << " continuity=" << continuity_violations
        << " clearance=" << clearance_violations
        << " fraction=" << fraction_violations
        << " event_flags=" << event_flag_violations
        << " max_step_m=" << max_step_m
        << " max_speed_mps=" << max_speed_mps
        << " min_crossing_clearance_m=" << min_crossing_clearance_m;
    return out.str();
}

ValidationReport validate(const std::vector<TrajectorySample>& samples,
                          const StringPrimitives& prims,
                          const ValidationLimits& limits) {
    ValidationReport report;
    if (samples.empty()) return report;

    const double offset_norm = prims.outOffset().delta.norm();
    const double min_clearance = limits.clearance_ratio * offset_norm;
    double min_seen_clearance = std::numeric_limits<double>::infinity();
    bool any_travel = false;

    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double dt = samples[i + 1].time_elapsed_sec -
                          samples[i].time_elapsed_sec;
        if (dt <= 0.0) continue;
        const double step =
            (samples[i + 1].tcp.position - samples[i].tcp.position).norm();
        const double speed = step / dt;
        report.max_step_m = std::max(report.max_step_m, step);
        report.max_speed_mps = std::max(report.max_speed_mps, speed);
        if (speed > limits.max_speed_mps + 1e-9) {
            ++report.continuity_violations;
            report.messages.push_back("sample " + std::to_string(i + 1) +
                                      ": speed " + std::to_string(speed) +
                                      " m/s exceeds limit");
        }
    }

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const TrajectorySample& s = samples[i];
        if (s.current_event_type == "CrossTravel") {
            // Labels read "cross A->D travel"; recover the string pair.
            std::istringstream words(s.event_label);
            std::string tag, pair;
            words >> tag >> pair;
            const auto arrow = pair.find("->");
            auto from = stringFromName(pair.substr(0, arrow));
            auto to = arrow == std::string::npos
                          ? std::nullopt
                          : stringFromName(pair.substr(arrow + 2));
            if (from && to) {
                any_travel = true;
                double clearance = std::numeric_limits<double>::infinity();
                for (StringId sid : {*from, *to}) {
                    clearance = std::min(
                        clearance,
                        distanceToLine(s.tcp.position, prims.frog(sid).position,
                                       prims.tip(sid).position));
                }
                min_seen_clearance = std::min(min_seen_clearance, clearance);
                if (clearance < min_clearance) {
                    ++report.clearance_violations;
                    report.messages.push_back(
                        "sample " + std::to_string(i) + ": crossing clearance " +
                        std::to_string(clearance) + " m below " +
                        std::to_string(min_clearance) + " m");
                }
            }
        } else if (s.current_event_type == "Stroke") {
            auto sid = stringFromName(s.current_string);
            if (!sid) {
                ++report.fraction_violations;
                report.messages.push_back("sample " + std::to_string(i) +
                                          ": stroke with no string annotation");
                continue;
            }
            try {
                fractionFromFrog(prims, *sid, s.tcp);
            } catch (const OffBowLine& e) {
                ++report.fraction_violations;
                report.messages.push_back("sample " + std::to_string(i) + ": " +
                                          e.what());
            }
        }
    }
    report.min_crossing_clearance_m = any_travel ? min_seen_clearance : 0.0;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const bool boundary =
            i == 0 ||
            samples[i].event_label != samples[i - 1].event_label ||
            samples[i].current_event_type != samples[i - 1].current_event_type;
        const bool flagged = samples[i].event_flag == 1;
        if (boundary != flagged) {
            ++report.event_flag_violations;
            report.messages.push_back("sample " + std::to_string(i) +
                                      ": event flag inconsistent with labels");
        }
    }
    return report;
}

} // namespace cellobow
