#pragma once

#include "pianoaug/audio.hpp"
#include "pianoaug/error.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pianoaug::augment {

// ---------------------------------------------------------------- EQ

enum class BandKind { LowShelf, Peaking, HighShelf };

struct EqBand {
    BandKind kind = BandKind::Peaking;
    double center_hz = 1000.0;
    double q = 0.9;
    double gain_db = 0.0;
};

constexpr std::size_t kEqBandCount = 7;
using EqGains = std::array<double, kEqBandCount>;

/// Fixed seven-band layout: low shelf 80 Hz, peaking 250/500/1k/2k/4k Hz
/// (Q 0.9), high shelf 6 kHz. Shelves use slope S = 1 (Q = 1/sqrt 2).
std::array<EqBand, kEqBandCount> eq_layout(const EqGains& gains = {});

struct BiquadCoeffs {
    double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;  // normalised by a0
};

/// RBJ audio-EQ-cookbook design. Throws BandAboveNyquist.
BiquadCoeffs design_biquad(const EqBand& band, int sample_rate);

/// Seven-section biquad cascade (direct form I, double state).
AudioClip apply_eq(const AudioClip& clip, const EqGains& gains_db);

// ---------------------------------------------------------------- noise

/// Noise gain that puts scaled noise `snr_db` below the signal in RMS.
double noise_gain(double rms_signal, double rms_noise, double snr_db);

/// Noise segment aligned to `length` samples: looped from a seeded start when
/// the clip is shorter, a seeded window when longer.
std::vector<float> place_noise(std::span<const float> noise, std::size_t length, std::uint64_t offset_seed);

/// Adds noise scaled so 20*log10(rms(signal)/rms(scaled noise)) == snr_db,
/// with the RMS taken over the segment actually mixed in.
/// Throws SilentSignal, SilentNoise or SampleRateMismatch.
AudioClip add_noise(const AudioClip& signal, const AudioClip& noise, double snr_db, std::uint64_t offset_seed);

constexpr double kSilenceRms = 1e-8;

// ---------------------------------------------------------------- pitch

struct PhaseVocoderParams {
    std::size_t fft_size = 1024;
    std::size_t hop = 256;  // synthesis hop
};

/// Phase-vocoder time stretch; output is roughly `factor` times longer.
std::vector<float> time_stretch(std::span<const float> x, double factor, const PhaseVocoderParams& params = {});

/// Shift by `cents` keeping the length: stretch by r = 2^(cents/1200), then
/// resample by 1/r. Zero cents returns an exact copy.
AudioClip pitch_shift(const AudioClip& clip, double cents, const PhaseVocoderParams& params = {});

// ---------------------------------------------------------------- reverb

/// Convolution with `ir` truncated to the input length, then rescaled so the
/// output peak equals the input peak. Kernels of at most
/// `kDirectConvolutionTaps` (after trailing-zero trim) use the direct sum.
/// Throws SilentImpulseResponse or SampleRateMismatch.
AudioClip apply_reverb(const AudioClip& clip, const AudioClip& ir);

constexpr std::size_t kDirectConvolutionTaps = 128;

// ---------------------------------------------------------------- banks

struct NoiseBank {
    std::vector<AudioClip> clips;
    std::vector<std::string> labels;
};

struct IrBank {
    std::vector<AudioClip> impulse_responses;
    std::vector<std::string> labels;
};

struct Banks {
    NoiseBank noise;
    IrBank ir;
};

/// Every *.wav under `dir` (sorted by name), resampled to `sample_rate` and
/// cut into `segment_seconds` pieces (0 keeps files whole). Silent segments
/// are skipped. Throws IoError if `dir` is missing.
NoiseBank load_noise_bank(const std::filesystem::path& dir, int sample_rate, double segment_seconds = 10.0);
IrBank load_ir_bank(const std::filesystem::path& dir, int sample_rate);

// ---------------------------------------------------------------- chain

enum class Stage { Eq1 = 0, Noise = 1, Pitch = 2, Eq2 = 3, Reverb = 4 };
constexpr std::size_t kStageCount = 5;
constexpr std::array<Stage, kStageCount> kStageOrder{Stage::Eq1, Stage::Noise, Stage::Pitch, Stage::Eq2, Stage::Reverb};

std::string_view to_string(Stage stage);

struct Range {
    double low = 0.0;
    double high = 0.0;
};

struct AugmentConfig {
    std::array<double, kStageCount> stage_probability{0.5, 0.5, 0.5, 0.5, 0.5};
    Range eq_gain_db{-10.0, 5.0};
    Range snr_db{17.5, 25.0};
    Range pitch_cents{-10.0, 10.0};
    std::filesystem::path noise_dir;
    std::filesystem::path ir_dir;

    double probability(Stage s) const { return stage_probability[static_cast<std::size_t>(s)]; }
    double& probability(Stage s) { return stage_probability[static_cast<std::size_t>(s)]; }

    /// Throws InvalidArgument for probabilities outside [0, 1] or low > high.
    void validate() const;
};

struct EqDraw {
    bool applied = false;
    EqGains gains_db{};
    friend bool operator==(const EqDraw&, const EqDraw&) = default;
};
struct NoiseDraw {
    bool applied = false;
    std::size_t clip_index = 0;
    double snr_db = 0.0;
    std::uint64_t offset_seed = 0;
    friend bool operator==(const NoiseDraw&, const NoiseDraw&) = default;
};
struct PitchDraw {
    bool applied = false;
    double cents = 0.0;
    friend bool operator==(const PitchDraw&, const PitchDraw&) = default;
};
struct ReverbDraw {
    bool applied = false;
    std::size_t ir_index = 0;
    friend bool operator==(const ReverbDraw&, const ReverbDraw&) = default;
};

/// Everything drawn for one example; `replay` reproduces the audio from it.
struct AppliedLog {
    std::uint64_t seed = 0;
    EqDraw eq1;
    NoiseDraw noise;
    PitchDraw pitch;
    EqDraw eq2;
    ReverbDraw reverb;

    bool applied(Stage s) const;
    friend bool operator==(const AppliedLog&, const AppliedLog&) = default;
};

/// Draw every stage's parameters from one generator seeded with `seed`.
///
/// Order, per stage in chain order: one uniform for the apply flag
/// (applied iff u < p), then the stage parameters, drawn whether or not the
/// stage is applied:
///   eq1/eq2  seven uniform gains, band order
///   noise    uniform clip index, uniform SNR, one raw 64-bit offset seed
///   pitch    uniform cents
///   reverb   uniform IR index
/// Throws EmptyBank if a stage with p > 0 has no bank entries.
AppliedLog draw_log(const AugmentConfig& config, const Banks& banks, std::uint64_t seed);

/// Applies the stages recorded in `log`. Errors are rethrown as StageError.
AudioClip replay(const AudioClip& clip, const AppliedLog& log, const Banks& banks);

std::pair<AudioClip, AppliedLog> augment_chain(const AudioClip& clip, const AugmentConfig& config, const Banks& banks,
                                               std::uint64_t seed);

class StageError : public Error {
public:
    StageError(Stage stage, const Error& cause)
        : Error(cause.code(), std::string("stage ") + std::string(to_string(stage)) + ": " + cause.what()), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

std::string log_to_json(const AppliedLog& log);
AppliedLog log_from_json(std::string_view text);

}  // namespace pianoaug::augment
