#include "pianoaug/augment.hpp"

#include "pianoaug/dsp.hpp"

#include <fmt/format.h>

namespace pianoaug::augment {

AudioClip apply_reverb(const AudioClip& clip, const AudioClip& ir) {
    if (clip.sample_rate != ir.sample_rate)
        throw Error(Errc::SampleRateMismatch, fmt::format("clip {} Hz, IR {} Hz", clip.sample_rate, ir.sample_rate));
    if (peak_abs(ir.samples) <= 0.0) throw Error(Errc::SilentImpulseResponse, "impulse response is all zeros");

    std::size_t taps = ir.size();
    while (taps > 0 && ir.samples[taps - 1] == 0.0f) --taps;
    const std::span<const float> kernel(ir.samples.data(), taps);

    const auto wet = taps <= kDirectConvolutionTaps ? dsp::direct_convolve(clip.samples, kernel)
                                                    : dsp::fft_convolve(clip.samples, kernel);

    AudioClip out{std::vector<float>(clip.size(), 0.0f), clip.sample_rate};
    double peak_out = 0.0;
    for (std::size_t i = 0; i < clip.size(); ++i) peak_out = std::max(peak_out, std::fabs(wet[i]));
    const double peak_in = peak_abs(clip.samples);
    if (peak_out == 0.0) return out;
    const double scale = peak_in / peak_out;
    for (std::size_t i = 0; i < clip.size(); ++i) out.samples[i] = static_cast<float>(scale == 1.0 ? wet[i] : wet[i] * scale);
    return out;
}

}  // namespace pianoaug::augment
