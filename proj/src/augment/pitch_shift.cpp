#include "pianoaug/augment.hpp"

#include "pianoaug/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace pianoaug::augment {

namespace {

double wrap_phase(double p) {
    return p - 2.0 * std::numbers::pi * std::round(p / (2.0 * std::numbers::pi));
}

}  // namespace

std::vector<float> time_stretch(std::span<const float> x, double factor, const PhaseVocoderParams& params) {
    const std::size_t n = params.fft_size;
    const std::size_t hs = params.hop;
    if (!(factor > 0.0) || n == 0 || hs == 0 || hs > n) throw Error(Errc::InvalidArgument, "bad phase vocoder parameters");
    if (x.size() < n) {
        std::vector<float> out(static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * factor)), 0.0f);
        return out;
    }

    const double ha = static_cast<double>(hs) / factor;
    const auto window = dsp::hann(n);
    const std::size_t bins = n / 2 + 1;

    std::vector<std::size_t> starts;
    for (std::size_t m = 0;; ++m) {
        const auto a = static_cast<std::size_t>(std::llround(static_cast<double>(m) * ha));
        if (a + n > x.size()) break;
        starts.push_back(a);
    }

    const std::size_t out_len = (starts.size() - 1) * hs + n;
    std::vector<double> acc(out_len, 0.0);
    std::vector<double> wsum(out_len, 0.0);
    std::vector<double> prev_phase(bins, 0.0);
    std::vector<double> synth_phase(bins, 0.0);
    std::vector<double> frame(n);
    std::vector<std::complex<double>> spec_out(bins);

    for (std::size_t m = 0; m < starts.size(); ++m) {
        for (std::size_t i = 0; i < n; ++i) frame[i] = x[starts[m] + i] * window[i];
        const auto spec = dsp::rfft(frame, n);
        const double da = m == 0 ? 0.0 : static_cast<double>(starts[m] - starts[m - 1]);
        for (std::size_t k = 0; k < bins; ++k) {
            const double mag = std::abs(spec[k]);
            const double phase = std::arg(spec[k]);
            if (m == 0) {
                synth_phase[k] = phase;
            } else {
                const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
                const double dev = wrap_phase(phase - prev_phase[k] - omega * da);
                const double inst = da > 0.0 ? omega + dev / da : omega;
                synth_phase[k] += inst * static_cast<double>(hs);
            }
            prev_phase[k] = phase;
            spec_out[k] = std::polar(mag, synth_phase[k]);
        }
        const auto y = dsp::irfft(spec_out, n);
        const std::size_t at = m * hs;
        for (std::size_t i = 0; i < n; ++i) {
            acc[at + i] += y[i] * window[i];
            wsum[at + i] += window[i] * window[i];
        }
    }

    std::vector<float> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = wsum[i] > 1e-3 ? static_cast<float>(acc[i] / wsum[i]) : 0.0f;
    return out;
}

AudioClip pitch_shift(const AudioClip& clip, double cents, const PhaseVocoderParams& params) {
    if (cents == 0.0 || clip.empty()) return clip;
    const double r = std::exp2(cents / 1200.0);
    const std::size_t pad = params.fft_size;

    std::vector<float> padded(clip.size() + 2 * pad, 0.0f);
    std::copy(clip.samples.begin(), clip.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

    const auto stretched = time_stretch(padded, r, params);
    // The vocoder maps input time t to r*t + (N/2)(1 - r); undo that after resampling by 1/r.
    const double lag = 0.5 * static_cast<double>(params.fft_size) * (1.0 - r) / r;
    const auto start = static_cast<std::size_t>(static_cast<double>(pad) + std::round(lag));
    const auto shifted = audio::resample_by_ratio(stretched, 1.0 / r, start + clip.size());

    AudioClip out{std::vector<float>(shifted.begin() + static_cast<std::ptrdiff_t>(start), shifted.end()), clip.sample_rate};
    return out;
}

}  // namespace pianoaug::augment
