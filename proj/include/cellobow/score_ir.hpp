#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellobow {

// Open cello strings, highest to lowest.
enum class StringId { A, D, G, C };

enum class Bowing { Down, Up };

inline Bowing flipped(Bowing b) {
    return b == Bowing::Down ? Bowing::Up : Bowing::Down;
}

const char* stringName(StringId s);
char toChar(Bowing b);
std::ostream& operator<<(std::ostream& os, StringId s);
std::ostream& operator<<(std::ostream& os, Bowing b);
std::optional<StringId> stringFromName(const std::string& name);

// MIDI pitch of each open string: A3=57, D3=50, G2=43, C2=36.
int openStringPitch(StringId s);

struct ScoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedFile : ScoreError {
    using ScoreError::ScoreError;
};
struct UnpairedNoteOn : ScoreError {
    using ScoreError::ScoreError;
};
struct NotOpenString : ScoreError {
    using ScoreError::ScoreError;
};
struct BelowRange : ScoreError {
    using ScoreError::ScoreError;
};
struct OverrideLengthMismatch : ScoreError {
    using ScoreError::ScoreError;
};

// One sounded note straight out of the MIDI file, still in tick time.
struct RawNoteEvent {
    int pitch = 0;            // 0..127
    std::int64_t onset_ticks = 0;
    std::int64_t duration_ticks = 0; // > 0
    int track = 0;
};

// Tick -> wall-clock mapping. Entries are (tick, microseconds per quarter
// note), sorted strictly by tick with an implicit default entry at tick 0.
struct TempoMap {
    struct Entry {
        std::int64_t tick = 0;
        std::int64_t us_per_quarter = 500000;
    };
    std::vector<Entry> entries{Entry{}};
    int ticks_per_quarter = 480;
};

// One note of the IR: target string, duration, bowing.
struct NoteSpec {
    StringId string = StringId::A;
    double duration_sec = 0.0; // > 0
    Bowing bowing = Bowing::Down;
    int pitch = 0;
    std::string note_name;
    double rest_before_sec = 0.0; // silence between the previous note and this one
};

struct NoteSequence {
    std::vector<NoteSpec> notes;
};

struct ParsedMidi {
    std::vector<RawNoteEvent> events;
    TempoMap tempo;
};

// Parse a Standard MIDI File (format 0 or 1). Events from all tracks are
// merged and sorted by onset tick; note-on with velocity 0 counts as
// note-off. Throws MalformedFile / UnpairedNoteOn.
ParsedMidi parseMidi(const std::vector<std::uint8_t>& bytes);

// Seconds spanned by [at_tick, at_tick + ticks], honoring every tempo
// change inside the interval.
double ticksToSeconds(std::int64_t ticks, std::int64_t at_tick,
                      const TempoMap& tempo);

enum class PitchMapping { Strict, Nearest };

// Strict: only the four open-string pitches. Nearest: highest open-string
// pitch <= input. Throws NotOpenString / BelowRange.
StringId mapPitchToString(int pitch, PitchMapping mode);

// "A3", "C#4", ... (MIDI 60 = C4).
std::string pitchToNoteName(int pitch);

// Parse a bowing override file: whitespace-separated D/U tokens,
// '#' starts a comment to end of line.
std::vector<Bowing> parseBowingOverride(const std::string& text);

// Fill in bowings: first note Down then strictly alternating, or the
// override copied verbatim. Throws OverrideLengthMismatch.
NoteSequence assignBowings(std::vector<NoteSpec> notes,
                           const std::optional<std::vector<Bowing>>& override_bowings);

// Full front end: parse, monophonic reduction (earlier note truncated at
// the later onset, zero-duration results dropped), tempo conversion,
// pitch->string mapping, rests kept as rest_before_sec, bowing assignment.
// Warnings (dropped notes) are appended to *warnings when non-null.
NoteSequence buildNoteSequence(const std::vector<std::uint8_t>& midi_bytes,
                               PitchMapping mode,
                               const std::optional<std::vector<Bowing>>& override_bowings,
                               std::vector<std::string>* warnings = nullptr);

// Tab-separated dump, one line per note:
// index, note_name, string, duration_sec (6 decimals), bowing.
std::string dumpNoteSequence(const NoteSequence& seq);

} // namespace cellobow
