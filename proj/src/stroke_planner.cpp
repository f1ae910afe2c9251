#include "cellobow/stroke_planner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cellobow {

const char* kindName(CommandKind k) {
    switch (k) {
    case CommandKind::Stroke: return "Stroke";
    case CommandKind::CrossOut: return "CrossOut";
    case CommandKind::CrossTravel: return "CrossTravel";
    case CommandKind::CrossSeat: return "CrossSeat";
    case CommandKind::Reposition: return "Reposition";
    case CommandKind::Hold: return "Hold";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, CommandKind k) {
    return os << kindName(k);
}

namespace {

std::optional<CommandKind> kindFromString(const std::string& s) {
    for (auto k : {CommandKind::Stroke, CommandKind::CrossOut,
                   CommandKind::CrossTravel, CommandKind::CrossSeat,
                   CommandKind::Reposition, CommandKind::Hold})
        if (s == kindName(k)) return k;
    return std::nullopt;
}

// Pose at a from-frog fraction, independent of stroke direction.
Pose poseAtFraction(const StringPrimitives& prims, StringId s, double u) {
    return bowPose(prims, s, u, Bowing::Down);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double strokeAlpha(double d, double cap_sec) {
    if (d < 0.0)
        throw NegativeDuration("negative note duration " + std::to_string(d));
    const double clamped = std::min(d, cap_sec);
    return (1.0 - std::cos(M_PI * clamped / cap_sec)) / 2.0;
}

double targetLength(const StringPrimitives& prims, StringId s, double d,
                    double cap_sec) {
    return strokeAlpha(d, cap_sec) * bowLength(prims, s);
}

std::pair<std::vector<MotionCommand>, BowState> planNote(
    const BowState& state, const NoteSpec& note, int note_index,
    const StringPrimitives& prims, const PlannerConfig& cfg) {
    const StringId s = note.string;
    const double len = bowLength(prims, s);
    const double u = fractionFromFrog(prims, s, state.pose);
    const double target_len = targetLength(prims, s, note.duration_sec,
                                           cfg.stroke_cap_sec);
    if (target_len > len + 1e-9)
        throw TargetUnreachable("stroke length exceeds bow length");

    Bowing b = note.bowing;
    auto availToward = [&](Bowing dir) {
        return dir == Bowing::Down ? (1.0 - u) * len : u * len;
    };

    std::vector<MotionCommand> commands;
    auto annotate = [&](MotionCommand& c, const char* what) {
        c.note_index = note_index;
        c.note_name = note.note_name;
        c.string_name = stringName(s);
        c.bowing = toChar(b);
        c.label = "note " + std::to_string(note_index) + " " + note.note_name +
                  " " + what;
    };

    double end_fraction;
    if (availToward(b) + 1e-12 >= target_len) {
        end_fraction = b == Bowing::Down ? u + target_len / len
                                         : u - target_len / len;
    } else if (target_len - availToward(b) <= cfg.endpoint_tolerance_m) {
        // Endpoint snap: terminate at the frog/tip without correction.
        end_fraction = b == Bowing::Down ? 1.0 : 0.0;
    } else if (availToward(flipped(b)) + 1e-12 >= target_len) {
        // Flip bowing and continue from the current pose.
        b = flipped(b);
        end_fraction = b == Bowing::Down ? u + target_len / len
                                         : u - target_len / len;
    } else {
        // Reset: reposition to the stroke's natural start, then stroke.
        const double start_fraction = b == Bowing::Down ? 0.0 : 1.0;
        const Pose repos_target = poseAtFraction(prims, s, start_fraction);
        const double dist = (repos_target.position - state.pose.position).norm();
        MotionCommand repos;
        repos.kind = CommandKind::Reposition;
        repos.target = repos_target;
        repos.duration_sec = std::max(dist / cfg.reposition_speed_mps, 1e-3);
        annotate(repos, "reposition");
        commands.push_back(std::move(repos));
        end_fraction = b == Bowing::Down ? target_len / len
                                         : 1.0 - target_len / len;
    }

    MotionCommand stroke;
    stroke.kind = CommandKind::Stroke;
    stroke.target = poseAtFraction(prims, s, std::clamp(end_fraction, 0.0, 1.0));
    stroke.duration_sec = note.duration_sec;
    annotate(stroke, "stroke");
    commands.push_back(stroke);

    BowState out{s, commands.back().target, b};
    return {std::move(commands), out};
}

std::pair<std::vector<MotionCommand>, BowState> planCrossing(
    const BowState& state, StringId to, const StringPrimitives& prims,
    const PlannerConfig& cfg) {
    if (state.string == to)
        throw PlannerError("crossing requested onto the current string");
    const OutOffset& off = prims.outOffset();
    const Pose lift = applyOutOffset(state.pose, off);
    const Pose seat = projectCrossing(prims, state.string, to, state.pose);
    const Pose travel = applyOutOffset(seat, off);

    const std::string pair =
        std::string(stringName(state.string)) + "->" + stringName(to);
    auto phaseDuration = [&](double dist) {
        return std::max(cfg.crossing_phase_sec, dist / cfg.reposition_speed_mps);
    };
    auto make = [&](CommandKind kind, const Pose& target, double dist,
                    const char* what) {
        MotionCommand c;
        c.kind = kind;
        c.target = target;
        c.duration_sec = phaseDuration(dist);
        c.bowing = toChar(state.bowing);
        c.label = "cross " + pair + " " + what;
        return c;
    };

    std::vector<MotionCommand> commands;
    commands.push_back(make(CommandKind::CrossOut, lift, off.delta.norm(), "out"));
    commands.push_back(make(CommandKind::CrossTravel, travel,
                            (travel.position - lift.position).norm(), "travel"));
    commands.push_back(make(CommandKind::CrossSeat, seat, off.delta.norm(), "seat"));
    return {std::move(commands), BowState{to, seat, state.bowing}};
}

MotionProgram compile(const NoteSequence& seq, const StringPrimitives& prims,
                      const PlannerConfig& cfg) {
    if (seq.notes.empty()) throw PlannerError("empty note sequence");

    MotionProgram program;
    program.config = cfg;
    program.source_hash = fnv1a64(dumpNoteSequence(seq));

    BowState state;
    state.string = seq.notes.front().string;
    state.pose = prims.frog(state.string);
    state.bowing = seq.notes.front().bowing;
    program.start = state.pose;

    bool flip_parity = false;
    for (std::size_t i = 0; i < seq.notes.size(); ++i) {
        NoteSpec note = seq.notes[i];
        if (flip_parity) note.bowing = flipped(note.bowing);

        if (note.rest_before_sec > 0.0) {
            MotionCommand hold;
            hold.kind = CommandKind::Hold;
            hold.target = state.pose;
            hold.duration_sec = note.rest_before_sec;
            hold.label = "hold";
            program.commands.push_back(std::move(hold));
        }
        if (note.string != state.string) {
            auto [cmds, next] = planCrossing(state, note.string, prims, cfg);
            program.commands.insert(program.commands.end(), cmds.begin(),
                                    cmds.end());
            state = next;
        }
        state.bowing = note.bowing;
        auto [cmds, next] = planNote(state, note, static_cast<int>(i), prims, cfg);
        program.commands.insert(program.commands.end(), cmds.begin(), cmds.end());
        if (next.bowing != note.bowing) flip_parity = !flip_parity;
        state = next;
    }

    double total = 0.0;
    for (const auto& c : program.commands) total += c.duration_sec;
    program.total_duration_sec = total;
    return program;
}

std::string writeProgram(const MotionProgram& program) {
    std::string out = "# cellobow-program v1\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(program.source_hash));
    out += "# source_hash " + std::string(hash) + " tol " +
           fmt(program.config.endpoint_tolerance_m) + " cap " +
           fmt(program.config.stroke_cap_sec) + " phase " +
           fmt(program.config.crossing_phase_sec) + " speed " +
           fmt(program.config.reposition_speed_mps) + "\n";
    out += "# start";
    const Vec6 sv = program.start.toVector();
    for (int i = 0; i < 6; ++i) out += " " + fmt(sv[i]);
    out += "\n";
    for (const auto& c : program.commands) {
        out += kindName(c.kind);
        const Vec6 v = c.target.toVector();
        for (int i = 0; i < 6; ++i) out += " " + fmt(v[i]);
        out += " " + fmt(c.duration_sec);
        out += " " + std::to_string(c.note_index);
        out += " " + (c.note_name.empty() ? std::string("-") : c.note_name);
        out += " " + c.string_name;
        out += std::string(" ") + c.bowing;
        out += " " + (c.label.empty() ? std::string("-") : c.label);
        out += "\n";
    }
    return out;
}

MotionProgram parseProgram(const std::string& text) {
    MotionProgram program;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_magic = false, saw_start = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream words(line);
            std::string hash_word, key;
            words >> hash_word >> key;
            if (key == "cellobow-program") {
                saw_magic = true;
            } else if (key == "source_hash") {
                std::string digest;
                words >> digest;
                program.source_hash = std::stoull(digest, nullptr, 16);
                std::string k;
                double v;
                while (words >> k >> v) {
                    if (k == "tol") program.config.endpoint_tolerance_m = v;
                    else if (k == "cap") program.config.stroke_cap_sec = v;
                    else if (k == "phase") program.config.crossing_phase_sec = v;
                    else if (k == "speed") program.config.reposition_speed_mps = v;
                }
            } else if (key == "start") {
                Vec6 v;
                for (int i = 0; i < 6; ++i)
                    if (!(words >> v[i]))
                        throw BadProgramFile("line " + std::to_string(lineno) +
                                             ": bad start pose");
                program.start = Pose::fromVector(v);
                saw_start = true;
            }
            continue;
        }
        std::istringstream words(line);
        std::string kind_word;
        words >> kind_word;
        auto kind = kindFromString(kind_word);
        if (!kind)
            throw BadProgramFile("line " + std::to_string(lineno) +
                                 ": unknown command kind '" + kind_word + "'");
        MotionCommand c;
        c.kind = *kind;
        Vec6 v;
        std::string bowing_word;
        if (!(words >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >>
              c.duration_sec >> c.note_index >> c.note_name >> c.string_name >>
              bowing_word))
            throw BadProgramFile("line " + std::to_string(lineno) +
                                 ": malformed command");
        c.target = Pose::fromVector(v);
        c.bowing = bowing_word.empty() ? '-' : bowing_word[0];
        std::getline(words, c.label);
        if (!c.label.empty() && c.label.front() == ' ') c.label.erase(0, 1);
        if (c.label == "-") c.label.clear();
        program.commands.push_back(std::move(c));
    }
    if (!saw_magic) throw BadProgramFile("missing program header");
    if (!saw_start) throw BadProgramFile("missing start pose");
    if (program.commands.empty()) throw BadProgramFile("program has no commands");
    double total = 0.0;
    for (const auto& c : program.commands) total += c.duration_sec;
    program.total_duration_sec = total;
    return program;
}

} // namespace cellobow
