#include "cellobow/score_ir.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

namespace cellobow {

const char* stringName(StringId s) {
    switch (s) {
    case StringId::A: return "A";
    case StringId::D: return "D";
    case StringId::G: return "G";
    case StringId::C: return "C";
    }
    return "?";
}

char toChar(Bowing b) { return b == Bowing::Down ? 'D' : 'U'; }

std::ostream& operator<<(std::ostream& os, StringId s) {
    return os << stringName(s);
}
std::ostream& operator<<(std::ostream& os, Bowing b) { return os << toChar(b); }

std::optional<StringId> stringFromName(const std::string& name) {
    if (name == "A") return StringId::A;
    if (name == "D") return StringId::D;
    if (name == "G") return StringId::G;
    if (name == "C") return StringId::C;
    return std::nullopt;
}

int openStringPitch(StringId s) {
    switch (s) {
    case StringId::A: return 57;
    case StringId::D: return 50;
    case StringId::G: return 43;
    case StringId::C: return 36;
    }
    return -1;
}

namespace {

// Byte cursor over the MIDI file with bounds checking.
class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size)
        : data_(data), size_(size) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint8_t peek() const {
        if (pos_ >= size_) throw MalformedFile("unexpected end of file");
        return data_[pos_];
    }
    std::uint32_t u16() {
        need(2);
        std::uint32_t v = (std::uint32_t(data_[pos_]) << 8) | data_[pos_ + 1];
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
        pos_ += 4;
        return v;
    }
    // Variable-length quantity, at most 4 bytes per the SMF spec.
    std::uint32_t vlq() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            std::uint8_t b = u8();
            v = (v << 7) | (b & 0x7f);
            if (!(b & 0x80)) return v;
        }
        throw MalformedFile("variable-length quantity longer than 4 bytes");
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }
    bool expectTag(const char* tag) {
        if (remaining() < 4) return false;
        bool ok = std::equal(tag, tag + 4, data_ + pos_);
        if (ok) pos_ += 4;
        return ok;
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw MalformedFile("unexpected end of file");
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

struct PendingNote {
    std::int64_t onset = 0;
    int track = 0;
};


} // namespace

ParsedMidi parseMidi(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes.data(), bytes.size());
    if (!r.expectTag("MThd")) throw MalformedFile("missing MThd header");
    const std::uint32_t header_len = r.u32();
    if (header_len < 6) throw MalformedFile("header chunk too short");
    const std::uint32_t format = r.u16();
    const std::uint32_t ntracks = r.u16();
    const std::uint32_t division = r.u16();
    if (format > 1) throw MalformedFile("unsupported MIDI format " +
                                        std::to_string(format));
    if (division & 0x8000)
        throw MalformedFile("SMPTE time division not supported");
    if (division == 0) throw MalformedFile("zero ticks per quarter note");
    if (ntracks == 0) throw MalformedFile("no tracks");
    r.skip(header_len - 6);

    ParsedMidi out;
    out.tempo.ticks_per_quarter = static_cast<int>(division);
    std::vector<TempoMap::Entry> tempo_entries;

    for (std::uint32_t t = 0; t < ntracks; ++t) {
        if (!r.expectTag("MTrk")) throw MalformedFile("missing MTrk chunk");
        const std::uint32_t length = r.u32();
        const std::size_t end = r.pos() + length;
        if (end > bytes.size()) throw MalformedFile("track chunk truncated");
        std::int64_t tick = 0;
        std::uint8_t running_status = 0;
        std::map<int, std::vector<PendingNote>> open_notes;

        auto closeNote = [&](int channel, int pitch, std::int64_t off_tick) {
            const int key = (channel << 8) | pitch;
            auto it = open_notes.find(key);
            if (it == open_notes.end() || it->second.empty())
                return; // stray note-off, tolerated
            PendingNote p = it->second.front();
            it->second.erase(it->second.begin());
            std::int64_t dur = off_tick - p.onset;
            if (dur > 0)
                out.events.push_back(RawNoteEvent{pitch, p.onset, dur, p.track});
        };

        while (r.pos() < end) {
            tick += r.vlq();
            std::uint8_t status = r.peek();
            if (status & 0x80) {
                r.u8();
                if (status < 0xf0) running_status = status;
            } else {
                if (!(running_status & 0x80))
                    throw MalformedFile("data byte without running status");
                status = running_status;
            }

            if (status == 0xff) {
                std::uint8_t type = r.u8();
                std::uint32_t len = r.vlq();
                if (type == 0x51) {
                    if (len != 3) throw MalformedFile("bad set-tempo length");
                    std::int64_t us = 0;
                    for (int i = 0; i < 3; ++i) us = (us << 8) | r.u8();
                    tempo_entries.push_back({tick, us});
                } else if (type == 0x2f) {
                    r.skip(len);
                    break;
                } else {
                    r.skip(len);
                }
            } else if (status == 0xf0 || status == 0xf7) {
                r.skip(r.vlq());
            } else {
                const int kind = status >> 4;
                const int channel = status & 0x0f;
                switch (kind) {
                case 0x9: {
                    int pitch = r.u8();
                    int vel = r.u8();
                    if (vel > 0)
                        open_notes[(channel << 8) | pitch].push_back(
                            {tick, static_cast<int>(t)});
                    else
                        closeNote(channel, pitch, tick);
                    break;
                }
                case 0x8: {
                    int pitch = r.u8();
                    r.u8();
                    closeNote(channel, pitch, tick);
                    break;
                }
                case 0xa: case 0xb: case 0xe:
                    r.skip(2);
                    break;
                case 0xc: case 0xd:
                    r.skip(1);
                    break;
                default:
                    throw MalformedFile("unknown status byte");
                }
            }
        }
        if (r.pos() > end) throw MalformedFile("track data overruns chunk");
        r.skip(end - r.pos());

        for (auto& [key, pending] : open_notes) {
            if (!pending.empty())
                throw UnpairedNoteOn(
                    "note-on without matching note-off, pitch " +
                    std::to_string(key & 0xff));
        }
    }

    std::sort(tempo_entries.begin(), tempo_entries.end(),
              [](const auto& a, const auto& b) { return a.tick < b.tick; });
    out.tempo.entries.clear();
    if (tempo_entries.empty() || tempo_entries.front().tick != 0)
        out.tempo.entries.push_back({0, 500000});
    for (const auto& e : tempo_entries) {
        if (!out.tempo.entries.empty() && out.tempo.entries.back().tick == e.tick)
            out.tempo.entries.back() = e; // last one at a tick wins
        else
            out.tempo.entries.push_back(e);
    }

    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const RawNoteEvent& a, const RawNoteEvent& b) {
                         if (a.onset_ticks != b.onset_ticks)
                             return a.onset_ticks < b.onset_ticks;
                         if (a.track != b.track) return a.track < b.track;
                         return a.pitch < b.pitch;
                     });
    return out;
}

double ticksToSeconds(std::int64_t ticks, std::int64_t at_tick,
                      const TempoMap& tempo) {
    if (ticks <= 0) return 0.0;
    const std::int64_t end_tick = at_tick + ticks;
    double seconds = 0.0;
    for (std::size_t i = 0; i < tempo.entries.size(); ++i) {
        const std::int64_t seg_start = std::max(at_tick, tempo.entries[i].tick);
        const std::int64_t seg_end =
            (i + 1 < tempo.entries.size())
                ? std::min(end_tick, tempo.entries[i + 1].tick)
                : end_tick;
        if (seg_end > seg_start) {
            seconds += double(seg_end - seg_start) *
                       double(tempo.entries[i].us_per_quarter) /
                       (1e6 * tempo.ticks_per_quarter);
        }
    }
    return seconds;
}

StringId mapPitchToString(int pitch, PitchMapping mode) {
    static constexpr std::array<std::pair<int, StringId>, 4> open = {{
        {36, StringId::C}, {43, StringId::G}, {50, StringId::D}, {57, StringId::A}}};
    if (mode == PitchMapping::Strict) {
        for (const auto& [p, s] : open)
            if (p == pitch) return s;
        throw NotOpenString("pitch " + std::to_string(pitch) +
                            " is not an open string (expected 36/43/50/57)");
    }
    if (pitch < 36)
        throw BelowRange("pitch " + std::to_string(pitch) +
                         " is below the lowest open string (C2 = 36)");
    StringId best = StringId::C;
    for (const auto& [p, s] : open)
        if (p <= pitch) best = s;
    return best;
}

std::string pitchToNoteName(int pitch) {
    static constexpr const char* names[12] = {"C", "C#", "D", "D#", "E", "F",
                                              "F#", "G", "G#", "A", "A#", "B"};
    const int octave = pitch / 12 - 1;
    return std::string(names[pitch % 12]) + std::to_string(octave);
}

std::vector<Bowing> parseBowingOverride(const std::string& text) {
    std::vector<Bowing> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream words(line);
        std::string tok;
        while (words >> tok) {
            if (tok == "D")
                out.push_back(Bowing::Down);
            else if (tok == "U")
                out.push_back(Bowing::Up);
            else
                throw ScoreError("bad bowing token '" + tok +
                                 "' (expected D or U)");
        }
    }
    return out;
}

NoteSequence assignBowings(
    std::vector<NoteSpec> notes,
    const std::optional<std::vector<Bowing>>& override_bowings) {
    if (notes.empty()) throw ScoreError("empty note sequence");
    if (override_bowings) {
        if (override_bowings->size() != notes.size())
            throw OverrideLengthMismatch(
                "bowing override has " + std::to_string(override_bowings->size()) +
                " entries for " + std::to_string(notes.size()) + " notes");
        for (std::size_t i = 0; i < notes.size(); ++i)
            notes[i].bowing = (*override_bowings)[i];
    } else {
        Bowing b = Bowing::Down;
        for (auto& n : notes) {
            n.bowing = b;
            b = flipped(b);
        }
    }
    return NoteSequence{std::move(notes)};
}

NoteSequence buildNoteSequence(
    const std::vector<std::uint8_t>& midi_bytes, PitchMapping mode,
    const std::optional<std::vector<Bowing>>& override_bowings,
    std::vector<std::string>* warnings) {
    ParsedMidi parsed = parseMidi(midi_bytes);
    if (parsed.events.empty()) throw ScoreError("MIDI file contains no notes");

    // Monophonic reduction: truncate at the next onset, drop zero-length.
    std::vector<RawNoteEvent> mono;
    for (const auto& ev : parsed.events) {
        if (!mono.empty()) {
            auto& prev = mono.back();
            if (ev.onset_ticks < prev.onset_ticks + prev.duration_ticks) {
                prev.duration_ticks = ev.onset_ticks - prev.onset_ticks;
                if (prev.duration_ticks <= 0) {
                    if (warnings)
                        warnings->push_back(
                            "dropped zero-duration note (pitch " +
                            std::to_string(prev.pitch) + " at tick " +
                            std::to_string(prev.onset_ticks) + ")");
                    mono.pop_back();
                }
            }
        }
        mono.push_back(ev);
    }

    std::vector<NoteSpec> notes;
    notes.reserve(mono.size());
    std::int64_t prev_end_tick = -1;
    for (const auto& ev : mono) {
        NoteSpec n;
        n.string = mapPitchToString(ev.pitch, mode);
        n.duration_sec = ticksToSeconds(ev.duration_ticks, ev.onset_ticks,
                                        parsed.tempo);
        n.pitch = ev.pitch;
        n.note_name = pitchToNoteName(ev.pitch);
        if (prev_end_tick >= 0 && ev.onset_ticks > prev_end_tick)
            n.rest_before_sec = ticksToSeconds(ev.onset_ticks - prev_end_tick,
                                               prev_end_tick, parsed.tempo);
        prev_end_tick = ev.onset_ticks + ev.duration_ticks;
        notes.push_back(std::move(n));
    }
    return assignBowings(std::move(notes), override_bowings);
}

std::string dumpNoteSequence(const NoteSequence& seq) {
    std::string out;
    char buf[128];
    for (std::size_t i = 0; i < seq.notes.size(); ++i) {
        const NoteSpec& n = seq.notes[i];
        std::snprintf(buf, sizeof(buf), "%zu\t%s\t%s\t%.6f\t%c\n", i,
                      n.note_name.c_str(), stringName(n.string), n.duration_sec,
                      toChar(n.bowing));
        out += buf;
    }
    return out;
}

} // namespace cellobow
