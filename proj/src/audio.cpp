#include "pianoaug/audio.hpp"

#include "pianoaug/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>

namespace pianoaug {

double rms(std::span<const float> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (float v : x) acc += static_cast<double>(v) * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

double peak_abs(std::span<const float> x) {
    double p = 0.0;
    for (float v : x) p = std::max(p, static_cast<double>(std::fabs(v)));
    return p;
}

bool all_finite(std::span<const float> x) {
    return std::all_of(x.begin(), x.end(), [](float v) { return std::isfinite(v); });
}

namespace audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }
std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back(v >> 8);
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Format {
    std::uint16_t tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

}  // namespace

AudioClip read_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(Errc::MalformedRiff, "missing RIFF/WAVE signature");

    std::optional<Format> fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const auto* id = bytes.data() + pos;
        const std::uint32_t len = le32(id + 4);
        const std::size_t body = pos + 8;
        const std::size_t avail = bytes.size() - body;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16 || len > avail) throw Error(Errc::MalformedRiff, "fmt chunk too short");
            const auto* p = bytes.data() + body;
            Format f{le16(p), le16(p + 2), le32(p + 4), le16(p + 12), le16(p + 14)};
            if (f.tag == kFormatExtensible) {
                if (len < 40) throw Error(Errc::MalformedRiff, "extensible fmt chunk too short");
                f.tag = le16(p + 24);  // first two bytes of the subformat GUID
            }
            fmt = f;
        } else if (std::memcmp(id, "data", 4) == 0) {
            // Streaming writers leave the size unset; take what is present.
            data = bytes.subspan(body, std::min<std::size_t>(len, avail));
            have_data = true;
        }
        if (len > avail) break;
        pos = body + len + (len & 1u);
    }
    if (!fmt) throw Error(Errc::MalformedRiff, "no fmt chunk");
    if (!have_data) throw Error(Errc::MalformedRiff, "no data chunk");
    if (fmt->channels == 0 || fmt->rate == 0 || fmt->rate > 0x7fffffff) throw Error(Errc::MalformedRiff, "invalid channel count or rate");

    const bool pcm = fmt->tag == kFormatPcm && (fmt->bits == 16 || fmt->bits == 24);
    const bool flt = fmt->tag == kFormatFloat && fmt->bits == 32;
    if (!pcm && !flt)
        throw Error(Errc::UnsupportedEncoding, fmt::format("format tag {} with {} bits", fmt->tag, fmt->bits));

    const std::size_t bytes_per_sample = fmt->bits / 8;
    const std::size_t frame = bytes_per_sample * fmt->channels;
    const std::size_t frames = data.size() / frame;

    AudioClip clip;
    clip.sample_rate = static_cast<int>(fmt->rate);
    clip.samples.resize(frames);
    const double inv_channels = 1.0 / fmt->channels;
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt->channels; ++c) {
            const auto* p = data.data() + i * frame + c * bytes_per_sample;
            double v;
            if (flt) {
                v = std::bit_cast<float>(le32(p));
                if (!std::isfinite(v)) throw Error(Errc::MalformedRiff, fmt::format("non-finite sample at frame {}", i));
            } else if (fmt->bits == 16) {
                v = static_cast<std::int16_t>(le16(p)) / 32768.0;
            } else {
                std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
                if (s & 0x800000) s -= 0x1000000;
                v = s / 8388608.0;
            }
            acc += v;
        }
        clip.samples[i] = static_cast<float>(fmt->channels == 1 ? acc : acc * inv_channels);
    }
    return clip;
}

std::vector<std::uint8_t> write_wav(const AudioClip& clip, Encoding encoding) {
    const std::uint16_t bits = encoding == Encoding::Pcm16 ? 16 : encoding == Encoding::Pcm24 ? 24 : 32;
    const std::uint16_t tag = encoding == Encoding::Float32 ? kFormatFloat : kFormatPcm;
    const std::uint32_t block = bits / 8;
    const auto data_len = static_cast<std::uint32_t>(clip.samples.size() * block);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len + 1);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put32(out, 36 + data_len + (data_len & 1u));
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(out, 16);
    put16(out, tag);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(clip.sample_rate));
    put32(out, static_cast<std::uint32_t>(clip.sample_rate) * block);
    put16(out, static_cast<std::uint16_t>(block));
    put16(out, bits);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put32(out, data_len);

    for (float s : clip.samples) {
        if (encoding == Encoding::Float32) {
            put32(out, std::bit_cast<std::uint32_t>(s));
            continue;
        }
        const double scale = encoding == Encoding::Pcm16 ? 32768.0 : 8388608.0;
        const double x = std::clamp(static_cast<double>(s), -1.0, 1.0);
        const auto q = static_cast<std::int32_t>(std::clamp(std::round(x * scale), -scale, scale - 1.0));
        const auto u = static_cast<std::uint32_t>(q);
        out.push_back(u & 0xff);
        out.push_back((u >> 8) & 0xff);
        if (encoding == Encoding::Pcm24) out.push_back((u >> 16) & 0xff);
    }
    if (data_len & 1u) out.push_back(0);
    return out;
}

AudioClip read_wav_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_wav(bytes);
}

void write_wav_file(const std::filesystem::path& path, const AudioClip& clip, Encoding encoding) {
    const auto bytes = write_wav(clip, encoding);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

namespace {

constexpr int kTableOversample = 1024;
constexpr double kKaiserBeta = 8.6;

// Kaiser-windowed sinc sampled on [0, Z] zero crossings.
const std::vector<double>& sinc_table() {
    static const std::vector<double> table = [] {
        const int n = kResampleZeroCrossings * kTableOversample + 2;
        std::vector<double> t(static_cast<std::size_t>(n));
        const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / kTableOversample;
            const double r = u / kResampleZeroCrossings;
            const double w = r < 1.0 ? std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) / norm : 0.0;
            const double s = u == 0.0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
            t[static_cast<std::size_t>(i)] = s * w;
        }
        return t;
    }();
    return table;
}

}  // namespace

std::vector<float> resample_by_ratio(std::span<const float> input, double ratio, std::size_t out_len) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw Error(Errc::InvalidArgument, "resample ratio must be > 0");
    std::vector<float> out(out_len, 0.0f);
    if (input.empty()) return out;

    const auto& table = sinc_table();
    const double scale = std::min(1.0, ratio);
    const double half_width = kResampleZeroCrossings / scale;  // in input samples
    const auto n_in = static_cast<std::int64_t>(input.size());

    for (std::size_t n = 0; n < out_len; ++n) {
        const double centre = static_cast<double>(n) / ratio;
        const auto k_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(centre - half_width)));
        const auto k_hi = std::min<std::int64_t>(n_in - 1, static_cast<std::int64_t>(std::floor(centre + half_width)));
        double acc = 0.0;
        for (auto k = k_lo; k <= k_hi; ++k) {
            const double u = std::fabs(centre - static_cast<double>(k)) * scale * kTableOversample;
            const auto i = static_cast<std::size_t>(u);
            const double frac = u - static_cast<double>(i);
            const double h = table[i] + frac * (table[i + 1] - table[i]);
            acc += h * input[static_cast<std::size_t>(k)];
        }
        out[n] = static_cast<float>(acc * scale);
    }
    return out;
}

AudioClip resample(const AudioClip& clip, int target_rate) {
    if (target_rate <= 0) throw Error(Errc::InvalidArgument, "target rate must be > 0");
    if (target_rate == clip.sample_rate) return clip;
    const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
    const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(clip.size()) * ratio));
    return {resample_by_ratio(clip.samples, ratio, out_len), target_rate};
}

}  // namespace audio
}  // namespace pianoaug
