#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pianoaug::dsp {

/// Forward real FFT of `x` zero-padded (or truncated) to `n`; returns n/2+1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);

/// Inverse of `rfft` including the 1/n normalisation; returns n samples.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

/// Full linear convolution (length x + h - 1) by FFT overlap-add.
std::vector<double> fft_convolve(std::span<const float> x, std::span<const float> h);

/// Full linear convolution by the direct sum; for short kernels.
std::vector<double> direct_convolve(std::span<const float> x, std::span<const float> h);

std::size_t next_pow2(std::size_t n);

std::vector<double> hann(std::size_t n);  // periodic

}  // namespace pianoaug::dsp
