#pragma once

#include "pianoaug/notes.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pianoaug::midi {

struct TempoEntry {
    std::int64_t tick = 0;
    std::uint32_t us_per_quarter = 500000;
};

/// Piecewise-constant tempo. `entries` is sorted and always starts at tick 0.
class TempoMap {
public:
    explicit TempoMap(int ticks_per_quarter = 480, std::vector<TempoEntry> entries = {});

    int ticks_per_quarter() const { return tpq_; }
    const std::vector<TempoEntry>& entries() const { return entries_; }

    double seconds_at(std::int64_t tick) const;

private:
    int tpq_;
    std::vector<TempoEntry> entries_;
    std::vector<double> entry_seconds_;  // absolute time of each entry
};

struct ParsedMidi {
    NoteSequence notes;
    TempoMap tempo;
};

/// Parse an SMF (format 0 or 1). All channels and tracks merge into one sequence.
/// Throws Error with MalformedHeader, TruncatedTrack, MalformedTrack or UnpairedNoteOn.
ParsedMidi parse_smf(std::span<const std::uint8_t> bytes);

/// Format-0 file at a fixed 500000 us/quarter.
std::vector<std::uint8_t> write_smf(const NoteSequence& seq, int ticks_per_quarter = 480);

ParsedMidi read_midi_file(const std::filesystem::path& path);
void write_midi_file(const std::filesystem::path& path, const NoteSequence& seq, int ticks_per_quarter = 480);

/// Variable-length quantity helpers, exposed for tests.
void append_vlq(std::vector<std::uint8_t>& out, std::uint32_t value);

}  // namespace pianoaug::midi
