#include "pianoaug/notes.hpp"

#include "pianoaug/error.hpp"
#include "pianoaug/random.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>
#include <utility>

namespace pianoaug {

namespace {

bool note_less(const NoteEvent& a, const NoteEvent& b) {
    if (a.onset != b.onset) return a.onset < b.onset;
    return a.pitch < b.pitch;
}

constexpr double kMinNoteLength = 1e-3;

}  // namespace

NoteSequence NoteSequence::from_notes(std::vector<NoteEvent> notes, double duration) {
    std::stable_sort(notes.begin(), notes.end(), note_less);
    NoteSequence seq{std::move(notes), duration};
    seq.duration = std::max(seq.duration, seq.max_offset());
    return seq;
}

double NoteSequence::max_offset() const {
    double m = 0.0;
    for (const auto& n : notes) m = std::max(m, n.offset);
    return m;
}

std::vector<Violation> validate(const NoteSequence& seq) {
    std::vector<Violation> out;
    const auto& notes = seq.notes;
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const auto& n = notes[i];
        if (!std::isfinite(n.onset) || !std::isfinite(n.offset)) {
            out.push_back({ViolationKind::NonFinite, i, fmt::format("note {}: non-finite time", i)});
            continue;
        }
        if (n.onset < 0.0)
            out.push_back({ViolationKind::NegativeOnset, i, fmt::format("note {}: onset {} < 0", i, n.onset)});
        if (!(n.offset > n.onset))
            out.push_back({ViolationKind::OffsetNotAfterOnset, i,
                           fmt::format("note {}: offset {} <= onset {}", i, n.offset, n.onset)});
        if (n.pitch < 0 || n.pitch > 127)
            out.push_back({ViolationKind::PitchOutOfRange, i, fmt::format("note {}: pitch {}", i, n.pitch)});
        if (n.velocity < 1 || n.velocity > 127)
            out.push_back({ViolationKind::VelocityOutOfRange, i, fmt::format("note {}: velocity {}", i, n.velocity)});
        if (i > 0 && note_less(n, notes[i - 1]))
            out.push_back({ViolationKind::Unsorted, i, fmt::format("note {}: out of (onset, pitch) order", i)});
    }

    std::set<std::pair<int, double>> seen;
    for (std::size_t i = 0; i < notes.size(); ++i) {
        if (!seen.emplace(notes[i].pitch, notes[i].onset).second)
            out.push_back({ViolationKind::DuplicatePitchOnset, i,
                           fmt::format("note {}: duplicate (pitch {}, onset {})", i, notes[i].pitch, notes[i].onset)});
    }

    const double max_off = seq.max_offset();
    if (std::isfinite(max_off) && seq.duration < max_off)
        out.push_back({ViolationKind::DurationTooShort, notes.size(),
                       fmt::format("duration {} < max offset {}", seq.duration, max_off)});
    return out;
}

namespace {

NoteSequence cut(const NoteSequence& seq, double start, double end, double length) {
    NoteSequence out;
    out.duration = length;
    for (const auto& n : seq.notes) {
        if (n.onset < start || n.onset >= end) continue;
        NoteEvent w = n;
        // onset < end can still round up to `length` after the subtraction
        w.onset = std::min(n.onset - start, std::nextafter(length, 0.0));
        w.offset = std::min(n.offset - start, length);
        out.notes.push_back(w);
    }
    return out;
}

}  // namespace

NoteSequence window_range(const NoteSequence& seq, double start, double end) {
    if (!(end > start)) throw Error(Errc::InvalidArgument, "window length must be > 0");
    return cut(seq, start, end, end - start);
}

NoteSequence window(const NoteSequence& seq, double start, double length) {
    if (!(length > 0.0)) throw Error(Errc::InvalidArgument, "window length must be > 0");
    return cut(seq, start, start + length, length);
}

NoteSequence perturb(const NoteSequence& seq, const PerturbOptions& opts) {
    if (opts.drop_p < 0.0 || opts.drop_p > 1.0 || opts.spurious_rate < 0.0 || opts.onset_jitter_std < 0.0)
        throw Error(Errc::InvalidArgument, "perturb: drop_p in [0,1], rate and jitter >= 0");

    Rng rng(opts.seed);
    std::vector<NoteEvent> notes;
    notes.reserve(seq.notes.size());
    for (const auto& n : seq.notes) {
        const bool keep = rng.uniform() >= opts.drop_p;
        if (!keep) continue;
        NoteEvent k = n;
        if (opts.onset_jitter_std > 0.0) {
            k.onset = std::max(0.0, n.onset + opts.onset_jitter_std * rng.normal());
            if (k.onset >= k.offset) k.onset = std::max(0.0, k.offset - kMinNoteLength);
        }
        notes.push_back(k);
    }

    if (opts.spurious_rate > 0.0) {
        double t = rng.exponential(opts.spurious_rate);
        while (t < seq.duration) {
            NoteEvent s;
            s.onset = t;
            s.pitch = 21 + static_cast<int>(rng.index(88));
            s.velocity = 1 + static_cast<int>(rng.index(127));
            s.offset = t + rng.uniform(0.1, 0.5);
            notes.push_back(s);
            t += rng.exponential(opts.spurious_rate);
        }
    }

    auto out = NoteSequence::from_notes(std::move(notes), seq.duration);
    // Jitter clamping can collapse two same-pitch onsets; keep the first.
    std::set<std::pair<int, double>> seen;
    std::erase_if(out.notes, [&](const NoteEvent& n) { return !seen.emplace(n.pitch, n.onset).second; });
    return out;
}

}  // namespace pianoaug
