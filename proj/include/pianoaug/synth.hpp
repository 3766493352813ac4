#pragma once

#include "pianoaug/audio.hpp"
#include "pianoaug/notes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pianoaug::synth {

struct TimbrePreset {
    std::string name = "default";
    int partial_count = 12;
    double partial_amplitude_rolloff = 1.0;  // amplitude of partial k is k^-rolloff
    double inharmonicity_coefficient = 0.0;  // B in f_k = k f0 sqrt(1 + B k^2)
    double decay_time_s = 1.5;
    double attack_time_s = 0.005;

    /// Throws InvalidArgument when attack >= decay or counts are non-positive.
    void validate() const;
};

/// Six presets spanning partial counts 8..20 and B in {0, 1e-4, 3e-4}.
const std::vector<TimbrePreset>& default_presets();

/// Additive render of `seq`: each note sums partials at k f0 sqrt(1 + B k^2),
/// with a linear attack and exponential decay, scaled by velocity/127. After the
/// note offset a release reaches e^-10 at offset + decay and is then cut.
/// Output length is round(seq.duration * sample_rate), peak-normalised to 0.9.
AudioClip render(const NoteSequence& seq, const TimbrePreset& preset, int sample_rate = kDefaultSampleRate);

double midi_to_hz(int pitch);

// Fixture generators for desk-scale runs.

/// Random piece: Poisson onsets at `notes_per_second`, pitch 21..108, length
/// 0.1..1.0 s, velocity 20..120. Repeated pitches never overlap.
NoteSequence random_piece(std::uint64_t seed, double duration_s, double notes_per_second = 6.0);

enum class NoiseColor { White, Pink, Brown };

/// Coloured noise with a slow random amplitude swell, peak 0.5.
AudioClip noise_clip(NoiseColor color, double seconds, std::uint64_t seed, int sample_rate = kDefaultSampleRate);

/// Synthetic room: unit direct path followed by exponentially decaying noise
/// reaching -60 dB at `rt60_s`.
AudioClip room_ir(double rt60_s, std::uint64_t seed, int sample_rate = kDefaultSampleRate);

}  // namespace pianoaug::synth
