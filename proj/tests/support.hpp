#pragma once
// Reference implementations the tests check the library against. They are
// deliberately naive and share no code with src/.

#include "pianoaug/audio.hpp"
#include "pianoaug/notes.hpp"
#include "pianoaug/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <unistd.h>
#include <vector>

namespace testing {

using pianoaug::AudioClip;
using pianoaug::NoteEvent;
using pianoaug::NoteSequence;

inline AudioClip sine(double hz, double seconds, int sr = 16000, double amp = 0.5, double phase = 0.0) {
    AudioClip c;
    c.sample_rate = sr;
    c.samples.resize(static_cast<std::size_t>(std::llround(seconds * sr)));
    for (std::size_t i = 0; i < c.samples.size(); ++i)
        c.samples[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / sr + phase));
    return c;
}

inline AudioClip noise(std::size_t n, std::uint64_t seed, int sr = 16000, double amp = 0.3) {
    pianoaug::Rng rng(seed);
    AudioClip c;
    c.sample_rate = sr;
    c.samples.resize(n);
    for (auto& s : c.samples) s = static_cast<float>(amp * (2.0 * rng.uniform() - 1.0));
    return c;
}

inline double rms(const std::vector<float>& x, std::size_t from = 0, std::size_t to = SIZE_MAX) {
    to = std::min(to, x.size());
    double acc = 0.0;
    for (std::size_t i = from; i < to; ++i) acc += static_cast<double>(x[i]) * x[i];
    return to > from ? std::sqrt(acc / static_cast<double>(to - from)) : 0.0;
}

inline double rms_diff(const std::vector<float>& a, const std::vector<float>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (static_cast<double>(a[i]) - b[i]) * (static_cast<double>(a[i]) - b[i]);
    return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

inline double db(double ratio) { return 20.0 * std::log10(ratio); }

/// |DTFT| of the Hann-windowed segment at frequency `hz`, by direct summation.
inline double dtft_mag(const std::vector<float>& x, std::size_t from, std::size_t to, double hz, int sr) {
    const std::size_t n = to - from;
    std::complex<double> acc{0.0, 0.0};
    const double w = 2.0 * std::numbers::pi * hz / sr;
    for (std::size_t i = 0; i < n; ++i) {
        const double win = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        acc += win * static_cast<double>(x[from + i]) * std::polar(1.0, -w * static_cast<double>(i));
    }
    return std::abs(acc);
}

/// Frequency of the strongest component in [lo, hi]: grid scan, then golden
/// section on the DTFT magnitude.
inline double peak_frequency(const std::vector<float>& x, int sr, double lo, double hi, std::size_t from = 0,
                             std::size_t to = SIZE_MAX) {
    to = std::min(to, x.size());
    const double seconds = static_cast<double>(to - from) / sr;
    const double step = 0.25 / seconds;
    double best = lo, best_mag = -1.0;
    for (double f = lo; f <= hi; f += step) {
        const double m = dtft_mag(x, from, to, f, sr);
        if (m > best_mag) best_mag = m, best = f;
    }
    double a = best - step, b = best + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = dtft_mag(x, from, to, c, sr), fd = dtft_mag(x, from, to, d, sr);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = dtft_mag(x, from, to, c, sr);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = dtft_mag(x, from, to, d, sr);
        }
    }
    return 0.5 * (a + b);
}

inline double cents(double f, double ref) { return 1200.0 * std::log2(f / ref); }

inline std::vector<double> naive_convolve(const std::vector<float>& x, const std::vector<float>& h) {
    if (x.empty() || h.empty()) return {};
    std::vector<double> y(x.size() + h.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += static_cast<double>(x[i]) * h[j];
    return y;
}

/// Maximum matching by exhaustive search over est subsets (est.size() <= 16).
inline std::size_t brute_force_matches(const NoteSequence& ref, const NoteSequence& est, double tol) {
    const std::size_t m = est.notes.size();
    std::vector<std::vector<int>> memo(ref.notes.size() + 1, std::vector<int>(std::size_t{1} << m, -1));
    auto ok = [&](std::size_t i, std::size_t j) {
        return ref.notes[i].pitch == est.notes[j].pitch && std::abs(ref.notes[i].onset - est.notes[j].onset) <= tol + 1e-9;
    };
    auto go = [&](auto&& self, std::size_t i, std::size_t mask) -> int {
        if (i == ref.notes.size()) return 0;
        int& r = memo[i][mask];
        if (r >= 0) return r;
        r = self(self, i + 1, mask);
        for (std::size_t j = 0; j < m; ++j)
            if (!(mask >> j & 1) && ok(i, j)) r = std::max(r, 1 + self(self, i + 1, mask | (std::size_t{1} << j)));
        return r;
    };
    return static_cast<std::size_t>(go(go, 0, 0));
}

/// Random note set squeezed into a few pitches and a short span so that
/// tolerance windows overlap and greedy matching would go wrong.
inline NoteSequence crowded_notes(pianoaug::Rng& rng, std::size_t max_n) {
    const std::size_t n = rng.index(max_n + 1);
    std::vector<NoteEvent> v;
    for (std::size_t i = 0; i < n; ++i) {
        NoteEvent e;
        e.pitch = 60 + static_cast<int>(rng.index(3));
        e.onset = std::round(rng.uniform(0.0, 0.3) * 1000.0) / 1000.0;
        e.offset = e.onset + 0.2;
        e.velocity = 64;
        const bool dup = std::any_of(v.begin(), v.end(), [&](const NoteEvent& o) { return o.pitch == e.pitch && o.onset == e.onset; });
        if (!dup) v.push_back(e);
    }
    return NoteSequence::from_notes(std::move(v));
}

/// Magnitude in dB of b(z)/a(z) at `hz`, normalised coefficients.
inline double biquad_response_db(double b0, double b1, double b2, double a1, double a2, double hz, int sr) {
    const auto z1 = std::polar(1.0, -2.0 * std::numbers::pi * hz / sr);
    const auto z2 = z1 * z1;
    return db(std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2)));
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("pianoaug_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(pianoaug::splitmix64(reinterpret_cast<std::uintptr_t>(this)) % 100000));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testing
