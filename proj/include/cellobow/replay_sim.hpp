#pragma once

#include <string>
#include <vector>

#include "cellobow/arm_kinematics.hpp"
#include "cellobow/stroke_planner.hpp"

namespace cellobow {

// One telemetry row; field order matches the 22-column trace schema.
struct TrajectorySample {
    double timestamp_robot = 0.0;   // synthetic wall clock
    double time_elapsed_sec = 0.0;  // from program start
    int event_flag = 0;             // 1 on the first sample of a command
    std::string event_label;
    std::string current_event_type; // command kind name
    int current_note_number = -1;   // note index in the score, -1 when no note sounds
    std::string current_note_name = "-";
    std::string current_string = "-";
    char current_bowing = '-';
    double remaining_duration_sec = 0.0;
    Pose tcp;
    JointVector joints = JointVector::Zero();
};

struct SimulateOptions {
    double dt = 0.01;
    double epoch = 1700000000.0; // fixed base for timestamp_robot
};

// Sample the program at a fixed timestep. Poses interpolate linearly
// within each command; joints come from the provider, which is called
// once per sample in time order. Row count is ceil(total/dt) + 1, with
// the first sample at t=0 and the last at t=total. When the provider
// throws NoConvergence the sample falls back to zero joints and a note
// is appended to *provider_notes.
std::vector<TrajectorySample> simulate(
    const MotionProgram& program, const SimulateOptions& opts,
    const JointProvider& provider = nullProvider,
    std::vector<std::string>* provider_notes = nullptr);

struct ValidationLimits {
    double max_speed_mps = 1.0;
    double clearance_ratio = 0.9; // of the out-offset positional norm
};

struct ValidationReport {
    double max_step_m = 0.0;          // largest inter-sample positional jump
    double max_speed_mps = 0.0;
    double min_crossing_clearance_m = 0.0; // over CrossTravel samples; 0 if none
    int continuity_violations = 0;
    int clearance_violations = 0;
    int fraction_violations = 0;
    int event_flag_violations = 0;
    std::vector<std::string> messages; // one located message per violation

    bool pass() const {
        return continuity_violations == 0 && clearance_violations == 0 &&
               fraction_violations == 0 && event_flag_violations == 0;
    }
    std::string summary() const;
};

// Trajectory-level checks: speed-limited continuity, out-offset clearance
// on crossing travel, on-string fraction bounds during strokes, and
// event-flag consistency. Failures are reported, never thrown.
ValidationReport validate(const std::vector<TrajectorySample>& samples,
                          const StringPrimitives& prims,
                          const ValidationLimits& limits = {});

} // namespace cellobow
