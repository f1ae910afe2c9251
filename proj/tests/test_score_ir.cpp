#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cellobow/score_ir.hpp"
#include "support/midi_builder.hpp"

using namespace cellobow;
using midi_builder::MidiBuilder;

TEST_CASE("parse_midi: minimal single-note file") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    auto parsed = parseMidi(b.bytes());
    REQUIRE(parsed.events.size() == 1);
    CHECK(parsed.events[0].pitch == 57);
    CHECK(parsed.events[0].onset_ticks == 0);
    CHECK(parsed.events[0].duration_ticks == 480);
    CHECK(parsed.tempo.ticks_per_quarter == 480);
    CHECK(parsed.tempo.entries.size() == 1);
    CHECK(parsed.tempo.entries[0].us_per_quarter == 500000);
}

TEST_CASE("parse_midi: note-on with velocity 0 acts as note-off") {
    MidiBuilder b(480);
    b.addNoteVelocityZeroOff(0, 50, 100, 240);
    auto parsed = parseMidi(b.bytes());
    REQUIRE(parsed.events.size() == 1);
    CHECK(parsed.events[0].onset_ticks == 100);
    CHECK(parsed.events[0].duration_ticks == 240);
}

TEST_CASE("parse_midi: malformed inputs rejected") {
    CHECK_THROWS_AS(parseMidi({}), MalformedFile);
    CHECK_THROWS_AS(parseMidi({'M', 'T', 'h', 'd'}), MalformedFile);
    // header declaring zero tracks
    std::vector<std::uint8_t> no_tracks = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                           0, 0, 0, 0, 0x01, 0xe0};
    CHECK_THROWS_AS(parseMidi(no_tracks), MalformedFile);
    // header promising a track that is missing
    std::vector<std::uint8_t> missing_track = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                               0, 0, 0, 1, 0x01, 0xe0};
    CHECK_THROWS_AS(parseMidi(missing_track), MalformedFile);
}

TEST_CASE("parse_midi: unreleased note rejected") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addUnpairedNoteOn(0, 50, 240);
    CHECK_THROWS_AS(parseMidi(b.bytes()), UnpairedNoteOn);
}

TEST_CASE("parse_midi: overlapping notes both emitted") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addNote(0, 50, 240, 480);
    auto parsed = parseMidi(b.bytes());
    REQUIRE(parsed.events.size() == 2);
    CHECK(parsed.events[0].pitch == 57);
    CHECK(parsed.events[0].duration_ticks == 480);
    CHECK(parsed.events[1].pitch == 50);
    CHECK(parsed.events[1].onset_ticks == 240);
}

TEST_CASE("parse_midi: multi-track merge sorted by onset") {
    MidiBuilder b(480, 2);
    b.addNote(1, 57, 480, 240);
    b.addNote(0, 50, 0, 240);
    auto parsed = parseMidi(b.bytes());
    REQUIRE(parsed.events.size() == 2);
    CHECK(parsed.events[0].pitch == 50);
    CHECK(parsed.events[1].pitch == 57);
    CHECK(parsed.events[1].track == 1);
}

TEST_CASE("ticks_to_seconds") {
    TempoMap tempo; // default 500000 us/qn at 480 tpq
    CHECK(ticksToSeconds(480, 0, tempo) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ticksToSeconds(0, 0, tempo) == 0.0);

    // tempo change at tick 480: 0.5 s for the first 480, 0.25 s for the rest
    TempoMap changed;
    changed.entries = {{0, 500000}, {480, 250000}};
    changed.ticks_per_quarter = 480;
    CHECK(ticksToSeconds(960, 0, changed) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(ticksToSeconds(480, 240, changed) ==
          doctest::Approx(0.25 + 0.125).epsilon(1e-12));
}

TEST_CASE("map_pitch_to_string") {
    CHECK(mapPitchToString(57, PitchMapping::Strict) == StringId::A);
    CHECK(mapPitchToString(50, PitchMapping::Strict) == StringId::D);
    CHECK(mapPitchToString(43, PitchMapping::Strict) == StringId::G);
    CHECK(mapPitchToString(36, PitchMapping::Strict) == StringId::C);
    CHECK_THROWS_AS(mapPitchToString(55, PitchMapping::Strict), NotOpenString);
    CHECK(mapPitchToString(55, PitchMapping::Nearest) == StringId::D);
    CHECK(mapPitchToString(36, PitchMapping::Nearest) == StringId::C);
    CHECK_THROWS_AS(mapPitchToString(35, PitchMapping::Nearest), BelowRange);
}

TEST_CASE("nearest mapping is monotone in the open-string pitch") {
    int prev = 36;
    for (int pitch = 36; pitch <= 127; ++pitch) {
        const int sp = openStringPitch(mapPitchToString(pitch, PitchMapping::Nearest));
        CHECK(sp >= prev);
        CHECK(sp <= pitch);
        prev = sp;
    }
}

TEST_CASE("assign_bowings") {
    std::vector<NoteSpec> notes(4);
    auto seq = assignBowings(notes, std::nullopt);
    REQUIRE(seq.notes.size() == 4);
    CHECK(seq.notes[0].bowing == Bowing::Down);
    CHECK(seq.notes[1].bowing == Bowing::Up);
    CHECK(seq.notes[2].bowing == Bowing::Down);
    CHECK(seq.notes[3].bowing == Bowing::Up);

    auto one = assignBowings(std::vector<NoteSpec>(1), std::nullopt);
    CHECK(one.notes[0].bowing == Bowing::Down);

    auto overridden = assignBowings(
        std::vector<NoteSpec>(3),
        std::vector<Bowing>{Bowing::Up, Bowing::Down, Bowing::Up});
    CHECK(overridden.notes[0].bowing == Bowing::Up);
    CHECK(overridden.notes[1].bowing == Bowing::Down);
    CHECK(overridden.notes[2].bowing == Bowing::Up);

    CHECK_THROWS_AS(
        assignBowings(std::vector<NoteSpec>(3), std::vector<Bowing>{Bowing::Up}),
        OverrideLengthMismatch);
}

TEST_CASE("bowing override file parsing") {
    auto bowings = parseBowingOverride("# comment\nU D U # trailing\n\nD\n");
    REQUIRE(bowings.size() == 4);
    CHECK(bowings[0] == Bowing::Up);
    CHECK(bowings[3] == Bowing::Down);
    CHECK_THROWS_AS(parseBowingOverride("D X"), ScoreError);
}

TEST_CASE("note names") {
    CHECK(pitchToNoteName(57) == "A3");
    CHECK(pitchToNoteName(50) == "D3");
    CHECK(pitchToNoteName(43) == "G2");
    CHECK(pitchToNoteName(36) == "C2");
    CHECK(pitchToNoteName(60) == "C4");
}

TEST_CASE("monophonic reduction truncates at the later onset") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addNote(0, 50, 240, 240);
    auto seq = buildNoteSequence(b.bytes(), PitchMapping::Strict, std::nullopt);
    REQUIRE(seq.notes.size() == 2);
    CHECK(seq.notes[0].duration_sec == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(seq.notes[1].duration_sec == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("zero-duration overlap results are dropped with a warning") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addNote(0, 50, 0, 480); // chord: lower note truncated to nothing
    std::vector<std::string> warnings;
    auto seq = buildNoteSequence(b.bytes(), PitchMapping::Strict, std::nullopt,
                                 &warnings);
    REQUIRE(seq.notes.size() == 1);
    CHECK(seq.notes[0].pitch == 57); // equal onsets keep the top voice
    CHECK(warnings.size() == 1);
}

TEST_CASE("rests preserved as rest_before_sec") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addNote(0, 50, 960, 480); // one-beat rest in between
    auto seq = buildNoteSequence(b.bytes(), PitchMapping::Strict, std::nullopt);
    REQUIRE(seq.notes.size() == 2);
    CHECK(seq.notes[0].rest_before_sec == 0.0);
    CHECK(seq.notes[1].rest_before_sec == doctest::Approx(0.5).epsilon(1e-12));
}

namespace {

// Random open-string sequences, written to MIDI and parsed back.
struct RandomScore {
    std::vector<int> pitches;
    std::vector<std::int64_t> durations;
    std::vector<std::uint8_t> bytes;
};

RandomScore makeRandomScore(std::mt19937& rng, bool with_tempo_changes) {
    static const int open[] = {36, 43, 50, 57};
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_int_distribution<int> count(1, 30);

    RandomScore score;
    MidiBuilder b(480);
    std::int64_t t = 0;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const int pitch = open[pick(rng)];
        const std::int64_t dur = 120 * len(rng);
        score.pitches.push_back(pitch);
        score.durations.push_back(dur);
        b.addNote(0, pitch, t, dur);
        t += dur;
    }
    if (with_tempo_changes) {
        b.addTempo(0, 0, 450000);
        b.addTempo(0, t / 2, 300000);
    }
    score.bytes = b.bytes();
    return score;
}

} // namespace

TEST_CASE("round trip: synthetic MIDI reproduces (string, duration) exactly") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        auto score = makeRandomScore(rng, trial % 2 == 1);
        auto parsed = parseMidi(score.bytes);
        auto seq = buildNoteSequence(score.bytes, PitchMapping::Strict,
                                     std::nullopt);
        REQUIRE(seq.notes.size() == score.pitches.size());

        double expected_total = 0.0;
        double actual_total = 0.0;
        for (std::size_t i = 0; i < seq.notes.size(); ++i) {
            CHECK(seq.notes[i].pitch == score.pitches[i]);
            const double expected = ticksToSeconds(
                parsed.events[i].duration_ticks, parsed.events[i].onset_ticks,
                parsed.tempo);
            CHECK(seq.notes[i].duration_sec ==
                  doctest::Approx(expected).epsilon(1e-9));
            expected_total += expected;
            actual_total += seq.notes[i].duration_sec;
        }
        CHECK(actual_total == doctest::Approx(expected_total).epsilon(1e-9));

        // alternation property
        for (std::size_t i = 0; i + 1 < seq.notes.size(); ++i)
            CHECK(seq.notes[i + 1].bowing != seq.notes[i].bowing);
    }
}

TEST_CASE("IR dump format") {
    MidiBuilder b(480);
    b.addNote(0, 57, 0, 480);
    b.addNote(0, 50, 480, 480);
    auto seq = buildNoteSequence(b.bytes(), PitchMapping::Strict, std::nullopt);
    CHECK(dumpNoteSequence(seq) ==
          "0\tA3\tA\t0.500000\tD\n"
          "1\tD3\tD\t0.500000\tU\n");
}
