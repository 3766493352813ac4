#pragma once

#include "pianoaug/audio.hpp"
#include "pianoaug/notes.hpp"
#include "pianoaug/random.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pianoaug::dataset {

struct SourceSpec {
    std::string name;
    std::filesystem::path audio_root;
    std::filesystem::path label_root;
    double weight = 0.0;
};

constexpr double kWeightTolerance = 1e-9;

/// Weights 1/4, 1/4, then 1/12 for each of six rendered sources.
std::vector<double> mixed_source_weights();

/// Seeded categorical draw over sources. Throws WeightsDoNotSumToOne.
class SourceSampler {
public:
    SourceSampler(std::vector<double> weights, std::uint64_t seed);
    SourceSampler(const std::vector<SourceSpec>& scheme, std::uint64_t seed);

    std::size_t draw();
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    Rng rng_;
};

struct ExampleWindow {
    std::string source;
    std::string file_id;
    double start = 0.0;
    double length = 10.0;
    bool padded = false;
    AudioClip audio;
    NoteSequence labels;
};

struct WindowOptions {
    double window_s = 10.0;
    double hop_s = 10.0;
    /// When set, the first window starts at a seeded offset in [0, hop).
    std::optional<std::uint64_t> random_offset_seed;
};

/// Cut (audio, labels) into fixed windows at start = offset + k * hop until the
/// audio is covered. Window bounds are snapped to sample positions so windows
/// with hop == length partition the onsets exactly. The last window is
/// zero-padded and flagged when it runs past the audio.
std::vector<ExampleWindow> build_examples(const AudioClip& audio, const NoteSequence& labels, const WindowOptions& opts,
                                          const std::string& source = {}, const std::string& file_id = {});

/// Frame-by-pitch training targets, row-major [frame][pitch].
struct TargetTensors {
    std::size_t frames = 0;
    double frames_per_second = 100.0;
    std::vector<float> onset_roll;
    std::vector<std::uint8_t> frame_roll;
    std::vector<float> velocity_roll;

    float onset(std::size_t t, int pitch) const { return onset_roll[t * 128 + static_cast<std::size_t>(pitch)]; }
    bool active(std::size_t t, int pitch) const { return frame_roll[t * 128 + static_cast<std::size_t>(pitch)] != 0; }
    float velocity(std::size_t t, int pitch) const { return velocity_roll[t * 128 + static_cast<std::size_t>(pitch)]; }
};

constexpr double kDefaultFps = 100.0;
constexpr int kDefaultOnsetSpread = 3;

/// frames = round(window_s * fps) + 1. The onset roll is a triangle of
/// half-width `spread` frames around each onset; frame_roll marks frame times
/// in [onset, offset); velocity is taken from the note owning the onset peak.
TargetTensors make_targets(const NoteSequence& labels, double window_s, double fps = kDefaultFps,
                           int spread = kDefaultOnsetSpread);

struct ManifestRecord {
    std::string source;
    std::string file;
    double start = 0.0;
    double length = 10.0;
    bool padded = false;
    std::uint64_t augment_seed = 0;

    friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

std::string to_json_line(const ManifestRecord& record);
ManifestRecord manifest_from_json_line(const std::string& line);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

/// Paired files under `<root>/<source>/<split>/{audio,midi}`, matched by stem.
struct FilePair {
    std::string id;
    std::filesystem::path audio;
    std::filesystem::path midi;
};

/// Throws DatasetMissing if the directories do not exist.
std::vector<FilePair> list_pairs(const std::filesystem::path& root, const std::string& source, const std::string& split);
std::vector<FilePair> list_pairs(const std::filesystem::path& audio_dir, const std::filesystem::path& midi_dir);

}  // namespace pianoaug::dataset
