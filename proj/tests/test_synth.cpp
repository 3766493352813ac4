#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pianoaug/error.hpp"
#include "pianoaug/synth.hpp"
#include "support.hpp"

#include <set>

using namespace pianoaug;

namespace {

const synth::TimbrePreset& preset(const std::string& name) {
    for (const auto& p : synth::default_presets())
        if (p.name == name) return p;
    FAIL("missing preset " << name);
    return synth::default_presets()[0];
}

double centroid(const std::vector<float>& x, std::size_t from, std::size_t n, int sr) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double hz = static_cast<double>(k) * sr / static_cast<double>(n);
        const double m = testing::dtft_mag(x, from, from + n, hz, sr);
        num += hz * m;
        den += m;
    }
    return num / den;
}

}  // namespace

TEST_CASE("preset catalogue") {
    const auto& ps = synth::default_presets();
    CHECK(ps.size() == 6);
    std::set<double> bs;
    for (const auto& p : ps) {
        CHECK_NOTHROW(p.validate());
        CHECK((p.partial_count >= 8 && p.partial_count <= 20));
        bs.insert(p.inharmonicity_coefficient);
    }
    CHECK(bs == std::set<double>{0.0, 1e-4, 3e-4});
    synth::TimbrePreset bad;
    bad.attack_time_s = 2.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("empty sequence renders silence") {
    NoteSequence s{{}, 1.25};
    const auto c = synth::render(s, synth::default_presets()[0], 16000);
    CHECK(c.size() == 20000);
    CHECK(std::all_of(c.samples.begin(), c.samples.end(), [](float v) { return v == 0.0f; }));
}

TEST_CASE("A4 fundamental") {
    CHECK(synth::midi_to_hz(69) == 440.0);
    CHECK(synth::midi_to_hz(57) == doctest::Approx(220.0));
    const auto c = synth::render(NoteSequence::from_notes({{69, 0.1, 1.1, 100}}, 1.5), preset("felt"), 16000);
    CHECK(testing::peak_frequency(c.samples, 16000, 400.0, 480.0, 2000, 12000) == doctest::Approx(440.0).epsilon(1.0 / 440.0));
}

TEST_CASE("inharmonic partials are stretched") {
    const auto& p = preset("bright-grand");
    const double b = p.inharmonicity_coefficient;
    const auto c = synth::render(NoteSequence::from_notes({{45, 0.0, 1.5, 100}}, 1.5), p, 16000);
    const double f0 = synth::midi_to_hz(45);
    for (int k : {2, 5}) {
        const double want = k * f0 * std::sqrt(1.0 + b * k * k);
        CHECK(testing::peak_frequency(c.samples, 16000, want - 4.0, want + 4.0, 800, 16800) ==
              doctest::Approx(want).epsilon(0.5 / want));
    }
}

TEST_CASE("presets sound different") {
    const auto seq = NoteSequence::from_notes({{60, 0.0, 0.6, 100}, {64, 0.0, 0.6, 100}, {67, 0.0, 0.6, 100}}, 0.6);
    const auto a = synth::render(seq, preset("bright-grand"));
    const auto b = synth::render(seq, preset("felt"));
    const double ca = centroid(a.samples, 800, 4096, 16000), cb = centroid(b.samples, 800, 4096, 16000);
    CHECK(std::abs(ca - cb) / std::min(ca, cb) > 0.10);
}

TEST_CASE("silence outside the sounding span") {
    for (const auto& p : synth::default_presets()) {
        const auto seq = NoteSequence::from_notes({{50, 1.0, 1.4, 90}, {62, 1.2, 1.5, 60}}, 1.5 + p.decay_time_s + 1.0);
        const auto c = synth::render(seq, p, 16000);
        const double peak = peak_abs(c.samples);
        const auto lo = static_cast<std::size_t>((1.0 - p.attack_time_s) * 16000) - 1;
        const auto hi = static_cast<std::size_t>((1.5 + p.decay_time_s) * 16000) + 1;
        CHECK(testing::rms(c.samples, 0, lo) < 1e-4 * peak);
        CHECK(testing::rms(c.samples, hi) < 1e-4 * peak);
    }
}

TEST_CASE("render is deterministic and peak normalised") {
    const auto seq = synth::random_piece(3, 5.0);
    const auto a = synth::render(seq, preset("upright"));
    CHECK(a == synth::render(seq, preset("upright")));
    CHECK(peak_abs(a.samples) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("energy grows with velocity") {
    // a fixed loud note owns the peak so normalisation does not mask the change
    double last = 0.0;
    for (int v : {10, 40, 70, 100, 126}) {
        const auto seq = NoteSequence::from_notes({{60, 0.0, 0.5, 127}, {60, 3.0, 3.5, v}}, 6.0);
        const auto c = synth::render(seq, preset("studio"));
        const double e = testing::rms(c.samples, 48000, 64000);
        CHECK(e > last);
        last = e;
    }
}

TEST_CASE("random pieces") {
    const auto a = synth::random_piece(11, 30.0, 6.0);
    CHECK(a == synth::random_piece(11, 30.0, 6.0));
    CHECK(validate(a).empty());
    CHECK(a.duration == 30.0);
    CHECK(static_cast<double>(a.size()) == doctest::Approx(180.0).epsilon(0.3));
    CHECK_THROWS_AS(synth::random_piece(1, 0.0), Error);
}

TEST_CASE("fixture noise and rooms") {
    for (auto color : {synth::NoiseColor::White, synth::NoiseColor::Pink, synth::NoiseColor::Brown}) {
        const auto n = synth::noise_clip(color, 2.0, 5);
        CHECK(n.size() == 32000);
        CHECK(peak_abs(n.samples) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(n == synth::noise_clip(color, 2.0, 5));
    }
    const auto ir = synth::room_ir(0.5, 1);
    CHECK(ir.size() == 8000);
    CHECK(ir.samples[0] >= 0.7f);
    // tail about 60 dB under the early reflections
    const double early = testing::rms(ir.samples, 80, 800), late = testing::rms(ir.samples, 7200, 8000);
    CHECK(testing::db(early / late) > 45.0);
}
