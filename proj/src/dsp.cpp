#include "pianoaug/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace pianoaug::dsp {

namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using ComplexBuf = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuf alloc_real(std::size_t n) { return RealBuf(fftw_alloc_real(n)); }
ComplexBuf alloc_complex(std::size_t n) { return ComplexBuf(fftw_alloc_complex(n)); }

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// Planning is not thread-safe in FFTW; execution on fresh arrays is.
// Plans live for the process lifetime.
PlanPair plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto in = alloc_real(n);
    auto out = alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(len, in.get(), out.get(), FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_1d(len, out.get(), in.get(), FFTW_ESTIMATE);
    cache.emplace(n, p);
    return p;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
    const auto plans = plans_for(n);
    auto in = alloc_real(n);
    auto out = alloc_complex(n / 2 + 1);
    const std::size_t m = std::min(n, x.size());
    std::copy_n(x.begin(), m, in.get());
    std::fill(in.get() + m, in.get() + n, 0.0);
    fftw_execute_dft_r2c(plans.forward, in.get(), out.get());
    std::vector<std::complex<double>> spec(n / 2 + 1);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = {out[k][0], out[k][1]};
    return spec;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    const auto plans = plans_for(n);
    auto in = alloc_complex(n / 2 + 1);
    auto out = alloc_real(n);
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        const auto c = k < spectrum.size() ? spectrum[k] : std::complex<double>{};
        in[k][0] = c.real();
        in[k][1] = c.imag();
    }
    // c2r destroys its input; `in` is a scratch copy.
    fftw_execute_dft_c2r(plans.inverse, in.get(), out.get());
    std::vector<double> y(out.get(), out.get() + n);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : y) v *= inv;
    return y;
}

std::vector<double> direct_convolve(std::span<const float> x, std::span<const float> h) {
    if (x.empty() || h.empty()) return {};
    std::vector<double> y(x.size() + h.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += xi * h[j];
    }
    return y;
}

std::vector<double> fft_convolve(std::span<const float> x, std::span<const float> h) {
    if (x.empty() || h.empty()) return {};
    const std::size_t m = h.size();
    const std::size_t n_fft = std::max<std::size_t>(4096, next_pow2(2 * m));
    const std::size_t block = n_fft - m + 1;

    std::vector<double> hd(h.begin(), h.end());
    const auto h_spec = rfft(hd, n_fft);

    std::vector<double> y(x.size() + m - 1, 0.0);
    std::vector<double> seg(block);
    for (std::size_t start = 0; start < x.size(); start += block) {
        const std::size_t len = std::min(block, x.size() - start);
        seg.assign(x.begin() + static_cast<std::ptrdiff_t>(start), x.begin() + static_cast<std::ptrdiff_t>(start + len));
        auto spec = rfft(seg, n_fft);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= h_spec[k];
        const auto part = irfft(spec, n_fft);
        const std::size_t valid = std::min(len + m - 1, y.size() - start);
        for (std::size_t i = 0; i < valid; ++i) y[start + i] += part[i];
    }
    return y;
}

}  // namespace pianoaug::dsp
