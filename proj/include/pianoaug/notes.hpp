#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pianoaug {

struct NoteEvent {
    int pitch = 60;        // MIDI note number, 0..127
    double onset = 0.0;    // seconds
    double offset = 0.0;   // seconds, > onset
    int velocity = 64;     // 1..127

    friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

/// Ordered note list plus a nominal duration. Construct through
/// `NoteSequence::from_notes` to get the canonical (onset, pitch) order.
struct NoteSequence {
    std::vector<NoteEvent> notes;
    double duration = 0.0;

    /// Sorts by (onset, pitch) and extends `duration` to cover every offset.
    static NoteSequence from_notes(std::vector<NoteEvent> notes, double duration = 0.0);

    double max_offset() const;
    std::size_t size() const { return notes.size(); }
    bool empty() const { return notes.empty(); }

    friend bool operator==(const NoteSequence&, const NoteSequence&) = default;
};

enum class ViolationKind {
    NonFinite,
    NegativeOnset,
    OffsetNotAfterOnset,
    PitchOutOfRange,
    VelocityOutOfRange,
    Unsorted,
    DuplicatePitchOnset,
    DurationTooShort,
};

struct Violation {
    ViolationKind kind;
    std::size_t index;  // offending note (or notes.size() for sequence-level)
    std::string message;
};

std::vector<Violation> validate(const NoteSequence& seq);

/// Notes with onset in [start, start + length), re-based to the window start
/// and with offsets clipped to `length`. Result duration is `length`.
NoteSequence window(const NoteSequence& seq, double start, double length);

/// Same as `window` but with an explicit end, so adjacent windows that share a
/// boundary partition the onsets exactly.
NoteSequence window_range(const NoteSequence& seq, double start, double end);

struct PerturbOptions {
    double drop_p = 0.0;
    double spurious_rate = 0.0;     // notes per second of `seq.duration`
    double onset_jitter_std = 0.0;  // seconds
    std::uint64_t seed = 0;
};

/// Label corruption with known statistics, used to exercise the evaluator.
///
/// Draw order: for each input note, one uniform for the keep decision, then
/// (kept notes only, jitter > 0) one normal for the onset shift. Spurious notes
/// then follow a Poisson process over [0, duration): exponential gap, pitch in
/// 21..108, velocity in 1..127, length in [0.1, 0.5) s.
NoteSequence perturb(const NoteSequence& seq, const PerturbOptions& opts);

}  // namespace pianoaug
