#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pianoaug {

constexpr int kDefaultSampleRate = 16000;

/// Mono floating-point audio.
struct AudioClip {
    std::vector<float> samples;
    int sample_rate = kDefaultSampleRate;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

    friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

double rms(std::span<const float> x);
double peak_abs(std::span<const float> x);
bool all_finite(std::span<const float> x);

namespace audio {

enum class Encoding { Pcm16, Pcm24, Float32 };

/// Decode RIFF/WAVE (PCM-16, PCM-24, float-32; WAVE_FORMAT_EXTENSIBLE accepted).
/// Channels are averaged to mono. Throws UnsupportedEncoding or MalformedRiff.
AudioClip read_wav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte-header WAV. PCM encodings clamp to [-1, 1] and round.
std::vector<std::uint8_t> write_wav(const AudioClip& clip, Encoding encoding = Encoding::Float32);

AudioClip read_wav_file(const std::filesystem::path& path);
void write_wav_file(const std::filesystem::path& path, const AudioClip& clip, Encoding encoding = Encoding::Float32);

/// Band-limited resampling to `target_rate`; output length is
/// round(size * target / source). Equal rates return a copy.
AudioClip resample(const AudioClip& clip, int target_rate);

/// Kaiser-windowed sinc interpolation at output positions n / ratio
/// (ratio = output rate / input rate). The anti-alias cutoff tracks
/// min(1, ratio) of the input Nyquist.
std::vector<float> resample_by_ratio(std::span<const float> input, double ratio, std::size_t out_len);

/// Half-width of the interpolation kernel in zero crossings of the lower rate.
constexpr int kResampleZeroCrossings = 48;

}  // namespace audio
}  // namespace pianoaug
