#include "pianoaug/augment.hpp"

#include "pianoaug/random.hpp"

#include <cmath>
#include <fmt/format.h>

namespace pianoaug::augment {

double noise_gain(double rms_signal, double rms_noise, double snr_db) {
    return rms_signal / rms_noise * std::pow(10.0, -snr_db / 20.0);
}

std::vector<float> place_noise(std::span<const float> noise, std::size_t length, std::uint64_t offset_seed) {
    std::vector<float> out(length);
    if (noise.empty() || length == 0) return out;
    Rng rng(offset_seed);
    if (noise.size() >= length) {
        const std::size_t start = rng.index(noise.size() - length + 1);
        std::copy_n(noise.begin() + static_cast<std::ptrdiff_t>(start), length, out.begin());
    } else {
        std::size_t pos = rng.index(noise.size());
        for (std::size_t i = 0; i < length; ++i) {
            out[i] = noise[pos];
            if (++pos == noise.size()) pos = 0;
        }
    }
    return out;
}

AudioClip add_noise(const AudioClip& signal, const AudioClip& noise, double snr_db, std::uint64_t offset_seed) {
    if (signal.sample_rate != noise.sample_rate)
        throw Error(Errc::SampleRateMismatch, fmt::format("signal {} Hz, noise {} Hz", signal.sample_rate, noise.sample_rate));
    const double rms_s = rms(signal.samples);
    if (rms_s < kSilenceRms) throw Error(Errc::SilentSignal, fmt::format("signal RMS {}", rms_s));
    const auto placed = place_noise(noise.samples, signal.size(), offset_seed);
    const double rms_n = rms(placed);
    if (rms_n < kSilenceRms) throw Error(Errc::SilentNoise, fmt::format("noise RMS {}", rms_n));

    const double g = noise_gain(rms_s, rms_n, snr_db);
    AudioClip out{std::vector<float>(signal.size()), signal.sample_rate};
    for (std::size_t i = 0; i < signal.size(); ++i)
        out.samples[i] = static_cast<float>(static_cast<double>(signal.samples[i]) + g * placed[i]);
    return out;
}

}  // namespace pianoaug::augment
