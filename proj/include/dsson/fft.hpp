#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "dsson/error.hpp"

namespace dsson {

// Iterative radix-2 Cooley-Tukey, in place. Size must be a power of two;
// plenty for the STFT frames and analysis windows used here.
inline void fft_inplace(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ParamError(Stage::mixdown, "FFT size must be a power of two, got " +
                                             std::to_string(n));
    for (std::size_t i = 1, j = 0; i < n; ++i) { // bit-reversal permutation
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

// Magnitude spectrum of a real block, zero-padded to a power of two.
// Returns bins 0 .. nfft/2.
inline std::vector<double> magnitude_spectrum(const std::vector<double>& block,
                                              std::size_t nfft = 0) {
    if (nfft == 0)
        nfft = next_pow2(block.size());
    std::vector<std::complex<double>> x(nfft, {0.0, 0.0});
    for (std::size_t i = 0; i < block.size() && i < nfft; ++i)
        x[i] = block[i];
    fft_inplace(x);
    std::vector<double> mag(nfft / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k)
        mag[k] = std::abs(x[k]);
    return mag;
}

} // namespace dsson
