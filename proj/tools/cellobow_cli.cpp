#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "cellobow/replay_sim.hpp"
#include "cellobow/score_ir.hpp"
#include "cellobow/stroke_planner.hpp"
#include "cellobow/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsageError = 2;
constexpr int kExitInputFormatError = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> readBinaryFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file: " + out_path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw UsageError("write failed: " + out_path);
}

cellobow::PitchMapping parseMapMode(const std::string& mode) {
    if (mode == "strict") return cellobow::PitchMapping::Strict;
    if (mode == "nearest") return cellobow::PitchMapping::Nearest;
    throw UsageError("--map must be 'strict' or 'nearest', got '" + mode + "'");
}

std::optional<std::vector<cellobow::Bowing>> loadBowings(
    const std::string& path) {
    if (path.empty()) return std::nullopt;
    return cellobow::parseBowingOverride(readTextFile(path));
}

cellobow::NoteSequence frontEnd(const std::string& midi_path,
                                const std::string& map_mode,
                                const std::string& bowings_path) {
    std::vector<std::string> warnings;
    auto seq = cellobow::buildNoteSequence(readBinaryFile(midi_path),
                                           parseMapMode(map_mode),
                                           loadBowings(bowings_path), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return seq;
}

// IK provider with seed chaining: each sample seeds from the previous
// sample's solution.
cellobow::JointProvider makeArmProvider(const std::string& arm_path) {
    if (arm_path.empty()) return cellobow::nullProvider;
    auto model = cellobow::loadArmModelFile(arm_path);
    auto seed = std::make_shared<cellobow::JointVector>(
        (cellobow::JointVector() << 0.3, -0.6, 1.0, -0.4, 0.5, 0.0).finished());
    return [model, seed](const cellobow::Pose& pose) {
        *seed = cellobow::ik(pose, *seed, model);
        return *seed;
    };
}

bool looksLikeMidi(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    return in && std::string(magic, 4) == "MThd";
}

int runValidation(const std::vector<cellobow::TrajectorySample>& samples,
                  const cellobow::StringPrimitives& prims) {
    auto report = cellobow::validate(samples, prims);
    std::cerr << report.summary() << "\n";
    for (const auto& m : report.messages) std::cerr << "violation: " << m << "\n";
    return report.pass() ? kExitOk : kExitValidationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIDI score to robot cello bowing trajectory compiler"};
    app.require_subcommand(1);

    std::string input, primitives_path, bowings_path, arm_path, out_path;
    std::string map_mode = "strict";
    double dt = 0.01;
    bool do_validate = false;
    cellobow::PlannerConfig planner_cfg;

    auto addFrontEndFlags = [&](CLI::App* cmd) {
        cmd->add_option("--map", map_mode, "pitch-to-string mapping: strict|nearest");
        cmd->add_option("--bowings", bowings_path, "bowing override file (D/U tokens)");
    };
    auto addPlannerFlags = [&](CLI::App* cmd) {
        cmd->add_option("--primitives", primitives_path,
                        "bowing primitives config file")->required();
        cmd->add_option("--tolerance", planner_cfg.endpoint_tolerance_m,
                        "endpoint snap tolerance, meters");
        cmd->add_option("--stroke-cap", planner_cfg.stroke_cap_sec,
                        "duration at which a stroke uses the full bow, seconds");
        cmd->add_option("--phase", planner_cfg.crossing_phase_sec,
                        "minimum crossing phase duration, seconds");
        cmd->add_option("--speed", planner_cfg.reposition_speed_mps,
                        "reposition/crossing speed cap, m/s");
    };

    auto* inspect = app.add_subcommand(
        "inspect", "parse a MIDI file and print the note sequence");
    inspect->add_option("midi", input, "input MIDI file")->required();
    addFrontEndFlags(inspect);

    auto* compile = app.add_subcommand(
        "compile", "compile a MIDI file into a motion program");
    compile->add_option("midi", input, "input MIDI file")->required();
    addFrontEndFlags(compile);
    addPlannerFlags(compile);
    compile->add_option("--out", out_path, "output path (default stdout)");

    auto* simulate = app.add_subcommand(
        "simulate", "sample a motion program (or MIDI file) into a telemetry trace");
    simulate->add_option("input", input, "motion program or MIDI file")->required();
    addFrontEndFlags(simulate);
    addPlannerFlags(simulate);
    simulate->add_option("--dt", dt, "sampling timestep, seconds");
    simulate->add_option("--arm", arm_path, "arm model config for joint columns");
    simulate->add_flag("--validate", do_validate,
                       "run trajectory checks, exit 1 on violations");
    simulate->add_option("--out", out_path, "output path (default stdout)");

    auto* validate_cmd = app.add_subcommand(
        "validate", "check a telemetry trace against the primitives");
    validate_cmd->add_option("trace", input, "telemetry CSV")->required();
    validate_cmd->add_option("--primitives", primitives_path,
                             "bowing primitives config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (inspect->parsed()) {
            std::cout << cellobow::dumpNoteSequence(
                frontEnd(input, map_mode, bowings_path));
            return kExitOk;
        }

        if (compile->parsed()) {
            auto prims = cellobow::loadPrimitivesFile(primitives_path);
            auto program = cellobow::compile(
                frontEnd(input, map_mode, bowings_path), prims, planner_cfg);
            emit(cellobow::writeProgram(program), out_path);
            return kExitOk;
        }

        if (simulate->parsed()) {
            if (dt <= 0.0) throw UsageError("--dt must be positive");
            auto prims = cellobow::loadPrimitivesFile(primitives_path);
            cellobow::MotionProgram program =
                looksLikeMidi(input)
                    ? cellobow::compile(frontEnd(input, map_mode, bowings_path),
                                        prims, planner_cfg)
                    : cellobow::parseProgram(readTextFile(input));
            std::vector<std::string> notes;
            auto samples = cellobow::simulate(program, {.dt = dt},
                                              makeArmProvider(arm_path), &notes);
            for (const auto& n : notes) std::cerr << "note: " << n << "\n";
            emit(cellobow::writeCsv(samples), out_path);
            return do_validate ? runValidation(samples, prims) : kExitOk;
        }

        if (validate_cmd->parsed()) {
            auto prims = cellobow::loadPrimitivesFile(primitives_path);
            auto trace = cellobow::readCsvFile(input);
            return runValidation(trace.rows, prims);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const cellobow::BadPrimitivesFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const cellobow::BadArmModelFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputFormatError;
    }
    return kExitUsageError;
}
