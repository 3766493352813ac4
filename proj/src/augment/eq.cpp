#include "pianoaug/augment.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

namespace pianoaug::augment {

namespace {

constexpr std::array<double, kEqBandCount> kCenters{80.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 6000.0};
constexpr double kPeakingQ = 0.9;

}  // namespace

std::array<EqBand, kEqBandCount> eq_layout(const EqGains& gains) {
    std::array<EqBand, kEqBandCount> bands;
    for (std::size_t i = 0; i < kEqBandCount; ++i) {
        const auto kind = i == 0 ? BandKind::LowShelf : i + 1 == kEqBandCount ? BandKind::HighShelf : BandKind::Peaking;
        const double q = kind == BandKind::Peaking ? kPeakingQ : std::numbers::sqrt2 / 2.0;
        bands[i] = {kind, kCenters[i], q, gains[i]};
    }
    return bands;
}

BiquadCoeffs design_biquad(const EqBand& band, int sample_rate) {
    if (band.center_hz >= 0.5 * sample_rate)
        throw Error(Errc::BandAboveNyquist,
                    fmt::format("{} Hz band at sample rate {} Hz", band.center_hz, sample_rate));
    const double A = std::pow(10.0, band.gain_db / 40.0);
    const double w0 = 2.0 * std::numbers::pi * band.center_hz / sample_rate;
    const double cw = std::cos(w0);
    const double alpha = std::sin(w0) / (2.0 * band.q);
    const double sqa = 2.0 * std::sqrt(A) * alpha;

    double b0, b1, b2, a0, a1, a2;
    switch (band.kind) {
    case BandKind::Peaking:
        b0 = 1.0 + alpha * A;
        b1 = -2.0 * cw;
        b2 = 1.0 - alpha * A;
        a0 = 1.0 + alpha / A;
        a1 = -2.0 * cw;
        a2 = 1.0 - alpha / A;
        break;
    case BandKind::LowShelf:
        b0 = A * ((A + 1) - (A - 1) * cw + sqa);
        b1 = 2 * A * ((A - 1) - (A + 1) * cw);
        b2 = A * ((A + 1) - (A - 1) * cw - sqa);
        a0 = (A + 1) + (A - 1) * cw + sqa;
        a1 = -2 * ((A - 1) + (A + 1) * cw);
        a2 = (A + 1) + (A - 1) * cw - sqa;
        break;
    case BandKind::HighShelf:
    default:
        b0 = A * ((A + 1) + (A - 1) * cw + sqa);
        b1 = -2 * A * ((A - 1) + (A + 1) * cw);
        b2 = A * ((A + 1) + (A - 1) * cw - sqa);
        a0 = (A + 1) - (A - 1) * cw + sqa;
        a1 = 2 * ((A - 1) - (A + 1) * cw);
        a2 = (A + 1) - (A - 1) * cw - sqa;
        break;
    }
    return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

AudioClip apply_eq(const AudioClip& clip, const EqGains& gains_db) {
    std::array<BiquadCoeffs, kEqBandCount> coeffs;
    const auto bands = eq_layout(gains_db);
    for (std::size_t i = 0; i < kEqBandCount; ++i) coeffs[i] = design_biquad(bands[i], clip.sample_rate);

    struct State {
        double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    };
    std::array<State, kEqBandCount> state{};

    AudioClip out{std::vector<float>(clip.size()), clip.sample_rate};
    for (std::size_t n = 0; n < clip.size(); ++n) {
        double v = clip.samples[n];
        for (std::size_t i = 0; i < kEqBandCount; ++i) {
            const auto& c = coeffs[i];
            auto& s = state[i];
            const double y = c.b0 * v + c.b1 * s.x1 + c.b2 * s.x2 - c.a1 * s.y1 - c.a2 * s.y2;
            s.x2 = s.x1;
            s.x1 = v;
            s.y2 = s.y1;
            s.y1 = y;
            v = y;
        }
        out.samples[n] = static_cast<float>(v);
    }
    return out;
}

}  // namespace pianoaug::augment
