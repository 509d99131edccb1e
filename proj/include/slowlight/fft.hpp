#pragma once

#include <complex>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 FFT. sign = -1 forward, +1 inverse
/// (inverse includes the 1/N factor).
inline void fft(std::vector<std::complex<double>>& data, int sign) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw numerical_error("fft: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (sign > 0)
        for (auto& x : data) x /= static_cast<double>(n);
}

/// Signed frequency of FFT bin k for sample rate fs (bins above N/2 are
/// negative frequencies).
inline double fft_bin_frequency(std::size_t k, std::size_t n, double fs) {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    return (k <= n / 2 ? kk : kk - nn) * fs / nn;
}

}  // namespace slowlight
