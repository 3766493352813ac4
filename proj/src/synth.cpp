#include "pianoaug/synth.hpp"

#include "pianoaug/error.hpp"
#include "pianoaug/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <map>
#include <numbers>

namespace pianoaug::synth {

namespace {

constexpr double kPeakTarget = 0.9;
constexpr double kReleaseDecades = 10.0;  // e-folds between offset and the hard cut

}  // namespace

void TimbrePreset::validate() const {
    if (partial_count < 1) throw Error(Errc::InvalidArgument, fmt::format("preset {}: partial_count < 1", name));
    if (!(attack_time_s >= 0.0 && attack_time_s < decay_time_s))
        throw Error(Errc::InvalidArgument, fmt::format("preset {}: attack must be shorter than decay", name));
    if (!(inharmonicity_coefficient >= 0.0) || !std::isfinite(partial_amplitude_rolloff))
        throw Error(Errc::InvalidArgument, fmt::format("preset {}: invalid inharmonicity or rolloff", name));
}

const std::vector<TimbrePreset>& default_presets() {
    static const std::vector<TimbrePreset> presets{
        {"bright-grand", 20, 0.8, 3e-4, 2.0, 0.003},
        {"warm-grand", 16, 1.4, 1e-4, 2.5, 0.006},
        {"upright", 12, 1.1, 3e-4, 1.2, 0.004},
        {"felt", 8, 2.0, 0.0, 1.0, 0.015},
        {"studio", 14, 1.0, 1e-4, 1.8, 0.005},
        {"honky", 10, 0.7, 0.0, 1.5, 0.002},
    };
    return presets;
}

double midi_to_hz(int pitch) { return 440.0 * std::exp2((pitch - 69) / 12.0); }

AudioClip render(const NoteSequence& seq, const TimbrePreset& preset, int sample_rate) {
    preset.validate();
    if (sample_rate <= 0) throw Error(Errc::InvalidArgument, "sample rate must be > 0");
    const auto len = static_cast<std::size_t>(std::llround(seq.duration * sample_rate));
    std::vector<double> mix(len, 0.0);
    const double dt = 1.0 / sample_rate;
    const double nyquist = 0.5 * sample_rate;

    for (const auto& note : seq.notes) {
        const auto begin = static_cast<std::size_t>(std::ceil(note.onset * sample_rate));
        const double cut = note.offset + preset.decay_time_s;
        const auto end = std::min(len, static_cast<std::size_t>(std::ceil(cut * sample_rate)));
        if (begin >= end) continue;
        const double f0 = midi_to_hz(note.pitch);
        const double amp = note.velocity / 127.0;
        const double release_tau = preset.decay_time_s / kReleaseDecades;

        for (int k = 1; k <= preset.partial_count; ++k) {
            const double fk = k * f0 * std::sqrt(1.0 + preset.inharmonicity_coefficient * k * k);
            if (fk >= nyquist) break;
            const double ak = amp * std::pow(static_cast<double>(k), -preset.partial_amplitude_rolloff);
            // Upper partials die away faster.
            const double tau = preset.decay_time_s / (1.0 + 0.15 * (k - 1));
            const double t0 = static_cast<double>(begin) * dt - note.onset;
            // Recursive oscillator: phasor *= rot each sample.
            std::complex<double> phasor = std::polar(1.0, 2.0 * std::numbers::pi * fk * t0);
            const std::complex<double> rot = std::polar(1.0, 2.0 * std::numbers::pi * fk * dt);
            double decay = std::exp(-t0 / tau);
            const double decay_step = std::exp(-dt / tau);
            double release = 1.0;
            const double release_step = std::exp(-dt / release_tau);
            for (std::size_t n = begin; n < end; ++n) {
                const double t = static_cast<double>(n) * dt - note.onset;
                double env = decay * release;
                if (t < preset.attack_time_s) env *= t / preset.attack_time_s;
                mix[n] += ak * env * phasor.imag();
                phasor *= rot;
                decay *= decay_step;
                const double since_off = static_cast<double>(n + 1) * dt - note.offset;
                if (since_off > 0.0) release = release == 1.0 ? std::exp(-since_off / release_tau) : release * release_step;
                if (((n - begin) & 1023) == 1023) phasor /= std::abs(phasor);
            }
        }
    }

    AudioClip out{std::vector<float>(len, 0.0f), sample_rate};
    double peak = 0.0;
    for (double v : mix) peak = std::max(peak, std::fabs(v));
    const double gain = peak > 0.0 ? kPeakTarget / peak : 0.0;
    for (std::size_t i = 0; i < len; ++i) out.samples[i] = static_cast<float>(mix[i] * gain);
    return out;
}

NoteSequence random_piece(std::uint64_t seed, double duration_s, double notes_per_second) {
    if (!(duration_s > 0.0) || !(notes_per_second > 0.0))
        throw Error(Errc::InvalidArgument, "random_piece needs positive duration and density");
    Rng rng(seed);
    std::vector<NoteEvent> notes;
    std::map<int, double> busy_until;
    for (double t = rng.exponential(notes_per_second); t < duration_s; t += rng.exponential(notes_per_second)) {
        NoteEvent n;
        n.pitch = 21 + static_cast<int>(rng.index(88));
        n.onset = std::round(t * 1000.0) / 1000.0;
        n.offset = std::min(duration_s, n.onset + rng.uniform(0.1, 1.0));
        n.velocity = 20 + static_cast<int>(rng.index(101));
        auto& until = busy_until[n.pitch];
        if (n.onset < until + 0.01 || n.offset - n.onset < 0.02) continue;
        until = n.offset;
        notes.push_back(n);
    }
    return NoteSequence::from_notes(std::move(notes), duration_s);
}

AudioClip noise_clip(NoiseColor color, double seconds, std::uint64_t seed, int sample_rate) {
    if (!(seconds > 0.0) || sample_rate <= 0) throw Error(Errc::InvalidArgument, "noise_clip needs positive length");
    Rng rng(seed);
    const auto len = static_cast<std::size_t>(std::llround(seconds * sample_rate));
    std::vector<double> x(len);
    // Paul Kellet's economy pink filter
    double b0 = 0, b1 = 0, b2 = 0, brown = 0;
    for (auto& v : x) {
        const double w = rng.normal();
        switch (color) {
        case NoiseColor::White: v = w; break;
        case NoiseColor::Pink:
            b0 = 0.99765 * b0 + w * 0.0990460;
            b1 = 0.96300 * b1 + w * 0.2965164;
            b2 = 0.57000 * b2 + w * 1.0526913;
            v = b0 + b1 + b2 + w * 0.1848;
            break;
        case NoiseColor::Brown:
            brown = 0.995 * brown + w;
            v = brown;
            break;
        }
    }
    const double rate = rng.uniform(0.1, 0.5);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double peak = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        x[i] *= 0.75 + 0.25 * std::sin(2.0 * std::numbers::pi * rate * static_cast<double>(i) / sample_rate + phase);
        peak = std::max(peak, std::abs(x[i]));
    }
    AudioClip out;
    out.sample_rate = sample_rate;
    out.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) out.samples[i] = static_cast<float>(peak > 0 ? 0.5 * x[i] / peak : 0.0);
    return out;
}

AudioClip room_ir(double rt60_s, std::uint64_t seed, int sample_rate) {
    if (!(rt60_s > 0.0) || sample_rate <= 0) throw Error(Errc::InvalidArgument, "room_ir needs positive rt60");
    Rng rng(seed);
    const auto len = static_cast<std::size_t>(std::llround(rt60_s * sample_rate));
    AudioClip out;
    out.sample_rate = sample_rate;
    out.samples.assign(std::max<std::size_t>(len, 1), 0.0f);
    out.samples[0] = 1.0f;
    const auto predelay = static_cast<std::size_t>(0.005 * sample_rate);
    const double k = std::log(1000.0) / (rt60_s * sample_rate);
    for (std::size_t i = predelay; i < out.samples.size(); ++i)
        out.samples[i] += static_cast<float>(0.3 * rng.normal() * std::exp(-k * static_cast<double>(i)));
    return out;
}

}  // namespace pianoaug::synth
