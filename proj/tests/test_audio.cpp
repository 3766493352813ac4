#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pianoaug/audio.hpp"
#include "pianoaug/error.hpp"
#include "support.hpp"

#include <cstring>

using namespace pianoaug;
using Bytes = std::vector<std::uint8_t>;

namespace {

void le(Bytes& b, std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Bytes wav(int tag, int channels, int rate, int bits, const Bytes& data, bool extensible = false, bool extra_chunk = false) {
    Bytes fmt_;
    le(fmt_, extensible ? 0xFFFE : static_cast<std::uint32_t>(tag), 2);
    le(fmt_, static_cast<std::uint32_t>(channels), 2);
    le(fmt_, static_cast<std::uint32_t>(rate), 4);
    le(fmt_, static_cast<std::uint32_t>(rate * channels * bits / 8), 4);
    le(fmt_, static_cast<std::uint32_t>(channels * bits / 8), 2);
    le(fmt_, static_cast<std::uint32_t>(bits), 2);
    if (extensible) {
        le(fmt_, 22, 2);
        le(fmt_, static_cast<std::uint32_t>(bits), 2);
        le(fmt_, 0, 4);
        le(fmt_, static_cast<std::uint32_t>(tag), 2);
        for (int i = 0; i < 14; ++i) fmt_.push_back(0);
    }
    Bytes body{'W', 'A', 'V', 'E', 'f', 'm', 't', ' '};
    le(body, static_cast<std::uint32_t>(fmt_.size()), 4);
    body.insert(body.end(), fmt_.begin(), fmt_.end());
    if (extra_chunk) {
        body.insert(body.end(), {'L', 'I', 'S', 'T'});
        le(body, 3, 4);
        body.insert(body.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
    }
    body.insert(body.end(), {'d', 'a', 't', 'a'});
    le(body, static_cast<std::uint32_t>(data.size()), 4);
    body.insert(body.end(), data.begin(), data.end());
    Bytes out{'R', 'I', 'F', 'F'};
    le(out, static_cast<std::uint32_t>(body.size()), 4);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Bytes pcm16(std::initializer_list<int> v) {
    Bytes b;
    for (int x : v) le(b, static_cast<std::uint32_t>(static_cast<std::uint16_t>(static_cast<std::int16_t>(x))), 2);
    return b;
}

Bytes f32(std::initializer_list<float> v) {
    Bytes b;
    for (float x : v) {
        std::uint32_t u;
        std::memcpy(&u, &x, 4);
        le(b, u, 4);
    }
    return b;
}

Errc code_of(const Bytes& b) {
    try {
        audio::read_wav(b);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::IoError;
}

}  // namespace

TEST_CASE("pcm decoding") {
    auto c = audio::read_wav(wav(1, 1, 16000, 16, pcm16({32767, -32768, 0, 16384})));
    REQUIRE(c.size() == 4);
    CHECK(c.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-9));
    CHECK(c.samples[1] == -1.0f);
    CHECK(c.samples[3] == 0.5f);
    CHECK(c.sample_rate == 16000);

    Bytes p24{0xFF, 0xFF, 0x7F, 0x00, 0x00, 0x80, 0x00, 0x00, 0x40};
    c = audio::read_wav(wav(1, 1, 44100, 24, p24));
    REQUIRE(c.size() == 3);
    CHECK(c.samples[1] == -1.0f);
    CHECK(c.samples[2] == 0.5f);
}

TEST_CASE("stereo averages to mono") {
    auto c = audio::read_wav(wav(3, 2, 22050, 32, f32({0.5f, -0.5f, 0.25f, 0.75f})));
    REQUIRE(c.size() == 2);
    CHECK(c.samples[0] == 0.0f);
    CHECK(c.samples[1] == 0.5f);
    CHECK(c.sample_rate == 22050);
}

TEST_CASE("extensible format and extra chunks") {
    auto c = audio::read_wav(wav(1, 1, 16000, 16, pcm16({16384}), true, true));
    REQUIRE(c.size() == 1);
    CHECK(c.samples[0] == 0.5f);
}

TEST_CASE("malformed input") {
    CHECK(code_of({}) == Errc::MalformedRiff);
    CHECK(code_of({'R', 'I', 'F', 'F', 0, 0, 0, 0, 'A', 'V', 'I', ' '}) == Errc::MalformedRiff);
    CHECK(code_of(wav(2, 1, 16000, 4, {})) == Errc::UnsupportedEncoding);  // ADPCM
    CHECK(code_of(wav(1, 1, 16000, 8, {})) == Errc::UnsupportedEncoding);
    CHECK(code_of(wav(3, 1, 16000, 32, f32({std::nanf("")}))) == Errc::MalformedRiff);
    auto no_data = wav(1, 1, 16000, 16, {});
    no_data.resize(no_data.size() - 8);
    CHECK(code_of(no_data) == Errc::MalformedRiff);
}

TEST_CASE("fuzzed headers never yield NaN") {
    Rng rng(9);
    const auto base = audio::write_wav(testing::noise(64, 1), audio::Encoding::Float32);
    for (int it = 0; it < 3000; ++it) {
        Bytes b = base;
        for (int k = 0; k < 4; ++k) b[rng.index(b.size())] = static_cast<std::uint8_t>(rng.index(256));
        if (rng.index(2)) b.resize(rng.index(b.size()));
        try {
            const auto c = audio::read_wav(b);
            CHECK(all_finite(c.samples));
        } catch (const Error& e) {
            CHECK((e.code() == Errc::MalformedRiff || e.code() == Errc::UnsupportedEncoding));
        }
    }
}

TEST_CASE("write_wav encodings") {
    AudioClip c{{1.5f, -1.5f, 0.5f, -0.25f}, 16000};
    const auto b = audio::write_wav(c, audio::Encoding::Pcm16);
    CHECK(b.size() == 44 + 8);
    CHECK(b[20] == 1);
    CHECK(static_cast<std::int16_t>(b[44] | b[45] << 8) == 32767);
    CHECK(static_cast<std::int16_t>(b[46] | b[47] << 8) == -32768);
    CHECK(static_cast<std::int16_t>(b[48] | b[49] << 8) == 16384);

    const auto f = audio::write_wav(c, audio::Encoding::Float32);
    CHECK(f[20] == 3);
    CHECK(f.size() == 44 + 16);

    const auto e = audio::write_wav(AudioClip{}, audio::Encoding::Pcm16);
    CHECK(e.size() == 44);
    CHECK(Bytes(e.begin() + 36, e.begin() + 44) == Bytes{'d', 'a', 't', 'a', 0, 0, 0, 0});
    CHECK(audio::read_wav(e).empty());
}

TEST_CASE("round trips over random clips") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(s);
        const int rates[] = {8000, 16000, 22050, 44100, 48000};
        auto clip = testing::noise(1 + rng.index(4000), s, rates[rng.index(5)], 1.0);
        CHECK(audio::read_wav(audio::write_wav(clip, audio::Encoding::Float32)) == clip);

        const auto p16 = audio::read_wav(audio::write_wav(clip, audio::Encoding::Pcm16));
        REQUIRE(p16.size() == clip.size());
        CHECK(p16.sample_rate == clip.sample_rate);
        double worst16 = 0.0, worst24 = 0.0;
        const auto p24 = audio::read_wav(audio::write_wav(clip, audio::Encoding::Pcm24));
        for (std::size_t i = 0; i < clip.size(); ++i) {
            const double x = std::min(clip.samples[i], 32767.0f / 32768.0f);
            worst16 = std::max(worst16, std::abs(p16.samples[i] - x));
            worst24 = std::max(worst24, std::abs(static_cast<double>(p24.samples[i]) - clip.samples[i]));
        }
        CHECK(worst16 <= 1.0 / 32768.0);
        CHECK(worst24 <= 1.0 / 8388608.0 + 1e-7);
    }
}

TEST_CASE("resample identity") {
    const auto c = testing::noise(1000, 3, 16000);
    CHECK(audio::resample(c, 16000) == c);
}

TEST_CASE("resample keeps a tone in place") {
    const auto c = testing::sine(440.0, 1.0, 44100);
    const auto r = audio::resample(c, 16000);
    CHECK(r.sample_rate == 16000);
    CHECK(r.size() == 16000);
    CHECK(testing::peak_frequency(r.samples, 16000, 300.0, 600.0) == doctest::Approx(440.0).epsilon(1.0 / 440.0));
}

TEST_CASE("resample lengths follow the rate ratio") {
    for (int from : {8000, 22050, 44100, 48000})
        for (int to : {16000, 32000, 11025}) {
            const auto c = testing::noise(12345, 1, from);
            CHECK(audio::resample(c, to).size() == static_cast<std::size_t>(std::llround(12345.0 * to / from)));
        }
}

TEST_CASE("up and back down is near lossless for band-limited input") {
    // tones well under the 8 kHz Nyquist; the edges are excluded from the comparison
    AudioClip x = testing::sine(300.0, 1.0, 16000, 0.3);
    const auto y = testing::sine(2100.0, 1.0, 16000, 0.2, 0.4);
    const auto z = testing::sine(5500.0, 1.0, 16000, 0.1, 1.3);
    for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += y.samples[i] + z.samples[i];
    const auto back = audio::resample(audio::resample(x, 32000), 16000);
    REQUIRE(back.size() == x.size());
    std::vector<float> a(x.samples.begin() + 800, x.samples.end() - 800), b(back.samples.begin() + 800, back.samples.end() - 800);
    CHECK(testing::db(testing::rms(a) / testing::rms_diff(a, b)) > 40.0);
}

TEST_CASE("downsampling removes content above the new Nyquist") {
    const auto c = testing::sine(10000.0, 1.0, 44100);
    const auto r = audio::resample(c, 16000);
    CHECK(testing::rms(r.samples, 1000, 15000) < 1e-3);
}

TEST_CASE("file helpers") {
    testing::TempDir dir("audio");
    const auto c = testing::noise(100, 5);
    audio::write_wav_file(dir.path / "x.wav", c);
    CHECK(audio::read_wav_file(dir.path / "x.wav") == c);
    CHECK_THROWS_AS(audio::read_wav_file(dir.path / "nope.wav"), Error);
}
