#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cellobow/bow_geometry.hpp"
#include "cellobow/score_ir.hpp"

namespace cellobow {

struct PlannerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NegativeDuration : PlannerError {
    using PlannerError::PlannerError;
};
struct TargetUnreachable : PlannerError {
    using PlannerError::PlannerError;
};
struct BadProgramFile : PlannerError {
    using PlannerError::PlannerError;
};

struct PlannerConfig {
    double endpoint_tolerance_m = 0.025;
    double stroke_cap_sec = 3.0;
    double crossing_phase_sec = 0.25;
    double reposition_speed_mps = 0.5;
};

// Planner running state: where the bow sits and which way it travels next.
struct BowState {
    StringId string = StringId::A;
    Pose pose;
    Bowing bowing = Bowing::Down;
};

enum class CommandKind { Stroke, CrossOut, CrossTravel, CrossSeat, Reposition, Hold };

const char* kindName(CommandKind k);
std::ostream& operator<<(std::ostream& os, CommandKind k);

struct MotionCommand {
    CommandKind kind = CommandKind::Stroke;
    Pose target;
    double duration_sec = 0.0;
    // Annotation: -1 / "-" for commands that do not sound a note.
    int note_index = -1;
    std::string note_name = "-";
    std::string string_name = "-"; // "A"/"D"/"G"/"C" or "-"
    char bowing = '-';             // 'D'/'U' or '-'
    std::string label;
};

struct MotionProgram {
    Pose start; // pose the first command departs from
    std::vector<MotionCommand> commands;
    double total_duration_sec = 0.0;
    std::uint64_t source_hash = 0;
    PlannerConfig config;
};

// Cosine duration-to-stroke-fraction map: (1 - cos(pi*min(d,cap)/cap))/2.
// Monotone nondecreasing, 0 at d=0, saturates to 1 at the cap.
double strokeAlpha(double d, double cap_sec = 3.0);

// Stroke length in meters for a note of duration d on string s.
double targetLength(const StringPrimitives& prims, StringId s, double d,
                    double cap_sec = 3.0);

// Plan one note on the string the bow already sits on. Selection order:
// same-direction fit, endpoint snap within tolerance, direction flip if
// the reversed run fits, otherwise reposition to the stroke's natural
// start (frog for down, tip for up). The returned state carries the final
// pose and possibly flipped bowing.
std::pair<std::vector<MotionCommand>, BowState> planNote(
    const BowState& state, const NoteSpec& note, int note_index,
    const StringPrimitives& prims, const PlannerConfig& cfg);

// Three-phase crossing: retreat out, travel above the strings to the
// projected fraction on the target, seat down onto it. Phase durations
// are stretched beyond crossing_phase_sec when needed to respect
// reposition_speed_mps.
std::pair<std::vector<MotionCommand>, BowState> planCrossing(
    const BowState& state, StringId to, const StringPrimitives& prims,
    const PlannerConfig& cfg);

// Compile a whole note sequence. Starts at the frog of the first note's
// string. Rests become Hold commands; string changes insert crossings.
MotionProgram compile(const NoteSequence& seq, const StringPrimitives& prims,
                      const PlannerConfig& cfg = {});

// Line-oriented text serialization, bit-stable across runs.
std::string writeProgram(const MotionProgram& program);
MotionProgram parseProgram(const std::string& text);

// FNV-1a 64-bit digest, used for MotionProgram::source_hash.
std::uint64_t fnv1a64(const std::string& data);

} // namespace cellobow
