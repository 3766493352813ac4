#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pianoaug/dsp.hpp"
#include "support.hpp"

#include <thread>

using namespace pianoaug;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x, std::size_t n) {
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k)
        for (std::size_t t = 0; t < std::min(n, x.size()); ++t)
            out[k] += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t) / static_cast<double>(n));
    return out;
}

std::vector<double> randv(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

}  // namespace

TEST_CASE("rfft matches the DFT sum") {
    for (std::size_t n : {1, 2, 7, 16, 100, 256}) {
        const auto x = randv(n, n);
        const auto got = dsp::rfft(x, n);
        const auto want = naive_dft(x, n);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
    }
}

TEST_CASE("rfft pads and truncates") {
    const auto x = randv(10, 1);
    const auto padded = dsp::rfft(x, 32);
    const auto want = naive_dft(x, 32);
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(padded[k] - want[k]) < 1e-9);
    const auto cut = dsp::rfft(x, 4);
    const auto want_cut = naive_dft(std::vector<double>(x.begin(), x.begin() + 4), 4);
    for (std::size_t k = 0; k < want_cut.size(); ++k) CHECK(std::abs(cut[k] - want_cut[k]) < 1e-9);
}

TEST_CASE("irfft inverts rfft") {
    for (std::size_t n : {8, 63, 1024}) {
        const auto x = randv(n, 3 * n);
        const auto back = dsp::irfft(dsp::rfft(x, n), n);
        REQUIRE(back.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
    }
}

TEST_CASE("convolutions agree with the direct sum") {
    for (auto [nx, nh] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {3, 5}, {1000, 1}, {4000, 700}, {20000, 5000}}) {
        const auto x = testing::noise(nx, nx + nh).samples;
        const auto h = testing::noise(nh, nx * 7 + nh).samples;
        const auto want = testing::naive_convolve(x, h);
        const auto fast = dsp::fft_convolve(x, h);
        const auto direct = dsp::direct_convolve(x, h);
        REQUIRE(fast.size() == want.size());
        REQUIRE(direct.size() == want.size());
        double e_fast = 0.0, e_direct = 0.0;
        for (std::size_t i = 0; i < want.size(); ++i) {
            e_fast = std::max(e_fast, std::abs(fast[i] - want[i]));
            e_direct = std::max(e_direct, std::abs(direct[i] - want[i]));
        }
        CHECK(e_fast < 1e-9);
        CHECK(e_direct < 1e-12);
    }
    CHECK(dsp::fft_convolve(std::vector<float>{}, std::vector<float>{1.0f}).empty());
}

TEST_CASE("fft plans are safe across threads") {
    const auto x = testing::noise(30000, 1).samples;
    const auto h = testing::noise(3000, 2).samples;
    const auto want = dsp::fft_convolve(x, h);
    std::vector<std::vector<double>> got(6);
    {
        std::vector<std::jthread> pool;
        for (auto& g : got) pool.emplace_back([&] { g = dsp::fft_convolve(x, h); });
    }
    for (const auto& g : got) CHECK(g == want);
}

TEST_CASE("helpers") {
    CHECK(dsp::next_pow2(0) == 1);
    CHECK(dsp::next_pow2(1) == 1);
    CHECK(dsp::next_pow2(5) == 8);
    CHECK(dsp::next_pow2(1024) == 1024);
    const auto w = dsp::hann(4);
    REQUIRE(w.size() == 4);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == doctest::Approx(0.5));
    CHECK(w[2] == doctest::Approx(1.0));
    CHECK(w[3] == doctest::Approx(0.5));
}
