#include "pianoaug/dataset.hpp"

#include "pianoaug/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <numeric>

namespace pianoaug::dataset {

std::vector<double> mixed_source_weights() {
    std::vector<double> w{1.0 / 4.0, 1.0 / 4.0};
    w.resize(8, 1.0 / 12.0);
    return w;
}

namespace {

std::vector<double> weights_of(const std::vector<SourceSpec>& scheme) {
    std::vector<double> w;
    w.reserve(scheme.size());
    for (const auto& s : scheme) w.push_back(s.weight);
    return w;
}

}  // namespace

SourceSampler::SourceSampler(std::vector<double> weights, std::uint64_t seed) : weights_(std::move(weights)), rng_(seed) {
    if (weights_.empty()) throw Error(Errc::WeightsDoNotSumToOne, "no sources");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw Error(Errc::WeightsDoNotSumToOne, fmt::format("negative weight {}", w));
        sum += w;
        cumulative_.push_back(sum);
    }
    if (std::fabs(sum - 1.0) > kWeightTolerance)
        throw Error(Errc::WeightsDoNotSumToOne, fmt::format("weights sum to {:.12f}", sum));
}

SourceSampler::SourceSampler(const std::vector<SourceSpec>& scheme, std::uint64_t seed)
    : SourceSampler(weights_of(scheme), seed) {}

std::size_t SourceSampler::draw() {
    const double u = rng_.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    if (i >= weights_.size()) i = weights_.size() - 1;
    return i;
}

std::vector<ExampleWindow> build_examples(const AudioClip& audio, const NoteSequence& labels, const WindowOptions& opts,
                                          const std::string& source, const std::string& file_id) {
    if (!(opts.window_s > 0.0) || !(opts.hop_s > 0.0)) throw Error(Errc::InvalidArgument, "window and hop must be > 0");
    const double sr = audio.sample_rate;
    const auto win = static_cast<std::int64_t>(std::llround(opts.window_s * sr));
    const auto hop = static_cast<std::int64_t>(std::llround(opts.hop_s * sr));
    if (win <= 0 || hop <= 0) throw Error(Errc::InvalidArgument, "window and hop must span at least one sample");
    std::int64_t offset = 0;
    if (opts.random_offset_seed) {
        Rng rng(*opts.random_offset_seed);
        offset = static_cast<std::int64_t>(rng.index(static_cast<std::size_t>(hop)));
    }

    const auto total = static_cast<std::int64_t>(audio.size());
    std::vector<ExampleWindow> out;
    for (std::int64_t start = offset; start < total; start += hop) {
        const std::int64_t end = start + win;
        ExampleWindow w;
        w.source = source;
        w.file_id = file_id;
        w.start = static_cast<double>(start) / sr;
        w.length = static_cast<double>(win) / sr;
        w.padded = end > total;
        w.audio.sample_rate = audio.sample_rate;
        w.audio.samples.assign(static_cast<std::size_t>(win), 0.0f);
        const auto avail = std::min(end, total) - start;
        std::copy_n(audio.samples.begin() + start, avail, w.audio.samples.begin());
        w.labels = window_range(labels, w.start, static_cast<double>(end) / sr);
        out.push_back(std::move(w));
    }
    return out;
}

TargetTensors make_targets(const NoteSequence& labels, double window_s, double fps, int spread) {
    if (!(fps > 0.0) || spread < 1 || !(window_s > 0.0)) throw Error(Errc::InvalidArgument, "fps, spread and window must be positive");
    TargetTensors t;
    t.frames_per_second = fps;
    t.frames = static_cast<std::size_t>(std::llround(window_s * fps)) + 1;
    t.onset_roll.assign(t.frames * 128, 0.0f);
    t.frame_roll.assign(t.frames * 128, 0);
    t.velocity_roll.assign(t.frames * 128, 0.0f);
    const auto last = static_cast<std::int64_t>(t.frames) - 1;

    for (const auto& n : labels.notes) {
        if (n.pitch < 0 || n.pitch > 127) continue;
        const auto p = static_cast<std::size_t>(n.pitch);
        const double centre = n.onset * fps;  // in frames
        const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(centre - spread)));
        const auto hi = std::min<std::int64_t>(last, static_cast<std::int64_t>(std::ceil(centre + spread)));
        for (auto f = lo; f <= hi; ++f) {
            const double v = 1.0 - std::fabs(static_cast<double>(f) - centre) / spread;
            if (v <= 0.0) continue;
            auto& cell = t.onset_roll[static_cast<std::size_t>(f) * 128 + p];
            if (v > cell) {
                cell = static_cast<float>(v);
                t.velocity_roll[static_cast<std::size_t>(f) * 128 + p] = static_cast<float>(n.velocity / 127.0);
            }
        }
        const auto f_on = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(n.onset * fps)));
        for (auto f = f_on; f <= last && static_cast<double>(f) / fps < n.offset; ++f) {
            if (static_cast<double>(f) / fps >= n.onset) t.frame_roll[static_cast<std::size_t>(f) * 128 + p] = 1;
        }
    }
    return t;
}

std::string to_json_line(const ManifestRecord& r) {
    nlohmann::json j{{"source", r.source}, {"file", r.file},     {"start", r.start},
                     {"length", r.length}, {"padded", r.padded}, {"augment_seed", r.augment_seed}};
    return j.dump();
}

ManifestRecord manifest_from_json_line(const std::string& line) {
    try {
        const auto j = nlohmann::json::parse(line);
        return {j.at("source").get<std::string>(), j.at("file").get<std::string>(), j.at("start").get<double>(),
                j.at("length").get<double>(),       j.value("padded", false),         j.at("augment_seed").get<std::uint64_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("manifest line: {}", e.what()));
    }
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
    for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
    std::vector<ManifestRecord> out;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(manifest_from_json_line(line));
    return out;
}

namespace {

std::map<std::string, std::filesystem::path> files_by_stem(const std::filesystem::path& dir,
                                                           std::initializer_list<std::string_view> exts) {
    std::map<std::string, std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (std::find(exts.begin(), exts.end(), ext) != exts.end()) out[entry.path().stem().string()] = entry.path();
    }
    return out;
}

}  // namespace

std::vector<FilePair> list_pairs(const std::filesystem::path& audio_dir, const std::filesystem::path& midi_dir) {
    for (const auto& d : {audio_dir, midi_dir})
        if (!std::filesystem::is_directory(d)) throw Error(Errc::DatasetMissing, fmt::format("{} is not a directory", d.string()));
    const auto audio = files_by_stem(audio_dir, {".wav"});
    const auto midi = files_by_stem(midi_dir, {".mid", ".midi"});
    std::vector<FilePair> out;
    for (const auto& [stem, path] : audio) {
        auto it = midi.find(stem);
        if (it != midi.end()) out.push_back({stem, path, it->second});
    }
    return out;
}

std::vector<FilePair> list_pairs(const std::filesystem::path& root, const std::string& source, const std::string& split) {
    const auto base = root / source / split;
    return list_pairs(base / "audio", base / "midi");
}

}  // namespace pianoaug::dataset
