#include "pianoaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace pianoaug::augment {

namespace {

std::vector<std::filesystem::path> wav_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(Errc::IoError, fmt::format("bank directory {} not found", dir.string()));
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

NoiseBank load_noise_bank(const std::filesystem::path& dir, int sample_rate, double segment_seconds) {
    NoiseBank bank;
    for (const auto& file : wav_files(dir)) {
        const auto clip = audio::resample(audio::read_wav_file(file), sample_rate);
        const std::size_t seg = segment_seconds > 0.0
                                    ? static_cast<std::size_t>(std::llround(segment_seconds * sample_rate))
                                    : clip.size();
        if (seg == 0) continue;
        // A short remainder stays only when it is the whole file.
        for (std::size_t start = 0, i = 0; start < clip.size(); start += seg, ++i) {
            const std::size_t len = std::min(seg, clip.size() - start);
            if (len < seg && start > 0) break;
            AudioClip piece{std::vector<float>(clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
                                               clip.samples.begin() + static_cast<std::ptrdiff_t>(start + len)),
                            sample_rate};
            if (rms(piece.samples) < kSilenceRms) continue;
            bank.clips.push_back(std::move(piece));
            bank.labels.push_back(fmt::format("{}#{}", file.filename().string(), i));
        }
    }
    return bank;
}

IrBank load_ir_bank(const std::filesystem::path& dir, int sample_rate) {
    IrBank bank;
    for (const auto& file : wav_files(dir)) {
        auto clip = audio::resample(audio::read_wav_file(file), sample_rate);
        if (peak_abs(clip.samples) <= 0.0) continue;
        bank.impulse_responses.push_back(std::move(clip));
        bank.labels.push_back(file.filename().string());
    }
    return bank;
}

}  // namespace pianoaug::augment
